"""Executable operadic categories, span calculus and polynomial functors.

Modules: zmod (exact integer linear algebra), operad, opcat, spans,
functorlab, doldkan, mackey, passi and cli.
"""

__version__ = "0.1.0"
