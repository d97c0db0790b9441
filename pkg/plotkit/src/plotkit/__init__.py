"""plotkit: figures from VMC run artifacts.

A pure consumer of the solver harness's CSV outputs.  It renders three
figure types — energy-vs-time traces with error bands, interaction-order
magnitude profiles, and disorder-sweep summaries — and never modifies the
run directories it reads.
"""

from .figures import (
    STYLE,
    build_disorder_delta,
    build_energy_trace,
    build_order_profile,
    plot_disorder_delta,
    plot_energy_trace,
    plot_order_profile,
    save_figure,
)
from .schemas import (
    ORDER_COLUMNS,
    SUMMARY_COLUMNS,
    TRACE_COLUMNS,
    DisorderSummary,
    OrderProfile,
    OrderTable,
    Reference,
    SchemaError,
    TraceSeries,
    TraceSet,
    read_disorder_summary,
    read_order_table,
    read_trace,
)

__all__ = [
    "STYLE",
    "SchemaError",
    "TRACE_COLUMNS",
    "ORDER_COLUMNS",
    "SUMMARY_COLUMNS",
    "TraceSeries",
    "TraceSet",
    "Reference",
    "OrderTable",
    "OrderProfile",
    "DisorderSummary",
    "read_trace",
    "read_order_table",
    "read_disorder_summary",
    "build_energy_trace",
    "build_order_profile",
    "build_disorder_delta",
    "plot_energy_trace",
    "plot_order_profile",
    "plot_disorder_delta",
    "save_figure",
]

__version__ = "0.1.0"
