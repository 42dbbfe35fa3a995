from .render import KINDS, PlotJob, SchemaMismatchError, render

__all__ = ["KINDS", "PlotJob", "SchemaMismatchError", "render"]
