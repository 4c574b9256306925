"""combforge: numerical certification of Haar-moment and quantum-comb bounds."""
from .kernels import BACKEND
from .operators import BudgetError, LabeledOperator, SystemLabel
from .young import StandardTableau, YoungDiagram

__version__ = "0.1.0"

__all__ = ["BACKEND", "BudgetError", "LabeledOperator", "StandardTableau", "SystemLabel", "YoungDiagram", "__version__"]
