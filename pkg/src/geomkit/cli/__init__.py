"""Command-line front end: file ingest, the processing pipeline and benchmarks."""
from .ingest import IngestError, ingest, write_csv_points
from .pipeline import PipelineConfig, PipelineError, PipelineResult, run_pipeline

__all__ = ["IngestError", "PipelineConfig", "PipelineError", "PipelineResult", "ingest", "run_pipeline",
           "write_csv_points"]
