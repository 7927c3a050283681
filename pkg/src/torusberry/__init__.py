"""Berry connection, curvature, holonomy and Gauss-Bonnet on a torus, with a spin-1/2 cross-check."""

from .geometry import ParamPoint, TorusShape
from .quantum import FieldParams
from .transport import ClosedPath, TangentVec, holonomy, latitude_loop, parallel_transport

__version__ = "0.1.0"
