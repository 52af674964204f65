"""Model for ResultRow."""

from sqlalchemy import BigInteger, Column, Float, Integer, String, UniqueConstraint

from rimc_calibration.models.base import Base

RESULT_KEY = ("method", "rank", "rho", "n_samples", "seed")
RESULT_FIELDS = RESULT_KEY + (
    "acc_teacher",
    "acc_drifted",
    "acc_calibrated",
    "gamma_total",
    "rram_writes",
    "sram_updates",
)


class ResultRow(Base):
    """
    One sweep cell: accuracies, adapter overhead and write counts of a single run.
    """

    __tablename__ = "result_rows"
    __table_args__ = (UniqueConstraint(*RESULT_KEY, name="uq_result_rows_key"),)

    id = Column(Integer, primary_key=True)
    method = Column(String(16), nullable=False)
    rank = Column(Integer, nullable=False)
    rho = Column(Float, nullable=False)
    n_samples = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)
    acc_teacher = Column(Float, nullable=False)
    acc_drifted = Column(Float, nullable=False)
    acc_calibrated = Column(Float, nullable=False)
    gamma_total = Column(Float, nullable=False, default=0.0)
    rram_writes = Column(BigInteger, nullable=False, default=0)
    sram_updates = Column(BigInteger, nullable=False, default=0)
    wall_ms = Column(Float, nullable=True)

    @property
    def key(self) -> tuple:
        return tuple(getattr(self, name) for name in RESULT_KEY)

    def to_dict(self, include_timing: bool = False) -> dict:
        data = {name: getattr(self, name) for name in RESULT_FIELDS}
        if include_timing:
            data["wall_ms"] = self.wall_ms
        return data

    def __repr__(self):
        return (
            f"<ResultRow(method='{self.method}', rank={self.rank}, rho={self.rho}, "
            f"n_samples={self.n_samples}, seed={self.seed})>"
        )
