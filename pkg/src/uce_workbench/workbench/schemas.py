"""Wire models for reports and the HTTP service.

A report is {version, domain, algebra, results} where every result carries
the check id, the shape, expected and computed graded invariants (null for
boolean checks), the verdict and the elapsed milliseconds.  "pass" is a
Python keyword, hence the aliased field.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..exactlin import GradedInvariants


class PartModel(BaseModel):
    free: int = 0
    torsion: list[int] = Field(default_factory=list)


class InvariantsModel(BaseModel):
    even: PartModel
    odd: PartModel

    @classmethod
    def from_invariants(cls, g: GradedInvariants) -> "InvariantsModel":
        return cls(even=PartModel(free=g.even.free_rank, torsion=list(g.even.torsion)),
                   odd=PartModel(free=g.odd.free_rank, torsion=list(g.odd.torsion)))


class CheckResult(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    check: str
    m: int
    n: int
    expected: InvariantsModel | None = None
    computed: InvariantsModel | None = None
    pass_: bool = Field(alias="pass")
    millis: int
    error: str | None = None


class Report(BaseModel):
    version: str
    domain: str
    algebra: str
    results: list[CheckResult]

    @property
    def all_pass(self) -> bool:
        return all(r.pass_ for r in self.results)


# -- service payloads -------------------------------------------------------


class ParseRequest(BaseModel):
    text: str
    label: str = ""


class ParseResponse(BaseModel):
    label: str
    ring: str
    rank: int
    names: list[str]
    parity: list[int]
    unit: str
    serialized: str


class H2Request(BaseModel):
    text: str
    label: str = ""
    m: int
    n: int
    target: str = "sl"


class VerifyRequest(BaseModel):
    text: str
    label: str = ""
    suite: str = "small-rank"


class CocycleRequest(BaseModel):
    text: str
    label: str = ""
    variant: str


class CocycleResponse(BaseModel):
    variant: str
    passed: bool
    verdicts: dict[str, bool]
    first_failure: str | None = None
