from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

REPORT_SCHEMA_VERSION = "1"


class Suite(str, Enum):
    LIE = "lie"
    STAR = "star"
    GROUP = "group"
    ENGEL = "engel"
    WITNESS = "witness"
    CLASS_BOUND = "class-bound"
    SANDWICH = "sandwich"
    ALL = "all"


class RunConfig(BaseModel):
    m: int = Field(ge=2)
    ground_size: int = Field(ge=1, le=64)
    seed: int = Field(ge=0)
    samples: int = Field(ge=0)
    jobs: int = Field(default=1, ge=1)
    r: int = Field(default=2, ge=1)
    suite: Suite = Suite.ALL
    output_path: Optional[str] = None
    force: bool = False


class FailureRecord(BaseModel):
    case_id: str
    inputs: Dict[str, str] = Field(default_factory=dict)  # text formats
    expected: str
    actual: str


class VerificationReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=REPORT_SCHEMA_VERSION, alias="schema")
    suite: str
    cases_total: int = 0
    cases_passed: int = 0
    cases_vacuous: int = 0
    failures: List[FailureRecord] = Field(default_factory=list)
    measured_values: Dict[str, Any] = Field(default_factory=dict)
    timing_ms: int = 0
    seed: Optional[int] = None
    config: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _counts_add_up(self):
        if self.cases_passed + len(self.failures) + self.cases_vacuous != self.cases_total:
            raise ValueError("cases_passed + failures + cases_vacuous must equal cases_total")
        return self

    @property
    def ok(self) -> bool:
        return not self.failures


class NormalFormPayload(BaseModel):
    epsilon: int = Field(ge=0, le=1)
    v_blocks: List[List[List[int]]]
    w_block: List[List[int]]


class ErrorReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=REPORT_SCHEMA_VERSION, alias="schema")
    error: str
    detail: str
    exit_status: int
