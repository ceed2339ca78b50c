from typing import Any

import numpy as np
from pydantic_core import core_schema


class FloatArray:
    """Pydantic compatible float64 numpy array field (read-only copy, lists on dump)"""

    @classmethod
    def __get_pydantic_core_schema__(cls, _source_type: Any, _handler: Any) -> core_schema.CoreSchema:
        return core_schema.no_info_plain_validator_function(
            cls.validate,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda value: np.asarray(value).tolist()
            ),
        )

    @classmethod
    def __get_pydantic_json_schema__(cls, _core_schema: Any, _handler: Any) -> dict:
        return {"type": "array", "items": {}}

    @classmethod
    def validate(cls, value) -> np.ndarray:
        try:
            array = np.array(value, dtype=float)
        except (TypeError, ValueError) as e:
            raise ValueError(f"Expected a numeric array: {e}")
        array.setflags(write=False)
        return array
