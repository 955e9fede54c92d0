from .metrics import ConfusionMatrix, EvalResult, evaluate, confusion_from_predictions
from .reports import emit_reports, GalleryRow
from . import figures

__all__ = [
    "ConfusionMatrix",
    "EvalResult",
    "evaluate",
    "confusion_from_predictions",
    "emit_reports",
    "GalleryRow",
    "figures",
]
