from pydantic import BaseModel, ConfigDict, Field


class QuadSpec(BaseModel):
    """Tolerances shared by every integral of the analytical chain."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rel_tol: float = Field(1e-6, gt=0, lt=1, description="relative tolerance")
    abs_tol: float = Field(1e-12, gt=0, description="absolute tolerance")
    max_subdivisions: int = Field(2000, gt=0, description="adaptive interval limit")
    tail_epsilon: float = Field(
        1e-7, gt=0, lt=1, description="relative tail mass left by truncation"
    )

    def inner(self) -> "QuadSpec":
        """Tighter spec for nested inner integrals (error budget split)."""
        return self.model_copy(
            update={
                "rel_tol": max(self.rel_tol / 10, 1e-13),
                "abs_tol": self.abs_tol / 10,
            }
        )
