"""ZX diagrams: evaluation, rewriting, model checking and gap search."""
from .diagram import Diagram, DiagramError, Node, is_isomorphic
from .phase import Phase
from .semantics import Mode, classify, compare, interpret

__all__ = ["Diagram", "DiagramError", "Node", "Phase", "Mode", "classify", "compare", "interpret", "is_isomorphic"]
__version__ = "0.1.0"
