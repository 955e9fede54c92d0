from .bits import BitSequence, bits_from_bytes, bits_from_fragment, bits_from_string
from .special import erfc, igamc
from .suite import (
    CANONICAL_ORDER,
    PASS,
    FAIL,
    INAPPLICABLE,
    StsConfig,
    TestResult,
    run_single_test,
    run_suite,
)
from .report import (
    ChunkReport,
    StsReport,
    aggregate_pass_rate,
    build_report,
    results_csv,
    summary_csv,
)

__all__ = [
    "BitSequence",
    "bits_from_bytes",
    "bits_from_fragment",
    "bits_from_string",
    "erfc",
    "igamc",
    "CANONICAL_ORDER",
    "PASS",
    "FAIL",
    "INAPPLICABLE",
    "StsConfig",
    "TestResult",
    "run_single_test",
    "run_suite",
    "ChunkReport",
    "StsReport",
    "aggregate_pass_rate",
    "build_report",
    "results_csv",
    "summary_csv",
]
