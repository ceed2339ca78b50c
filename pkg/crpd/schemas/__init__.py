from .crossval import CURVE_COLUMNS, CvCurvePoint, CvDocument
from .estimation import ESTIMATE_COLUMNS, EstimationDocument, ParameterEstimate
from .simulation import SimulationDocument

# Output document of each command, as exported by the schema subcommand
DOCUMENTS = {
    "estimate": EstimationDocument,
    "crossval": CvDocument,
    "simulate": SimulationDocument,
}

__all__ = [
    'CURVE_COLUMNS',
    'CvCurvePoint',
    'CvDocument',
    'DOCUMENTS',
    'ESTIMATE_COLUMNS',
    'EstimationDocument',
    'ParameterEstimate',
    'SimulationDocument',
]
