"""
Resolved command-line knobs for one run
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from config import config
from utils.error_handler import UsageError, validate_range


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str]
    output: Optional[str]
    N: Optional[int] = None
    n: int = 1
    m_lo: int = 1
    m_hi: int = 4
    n_max: int = 40
    seed: int = 0
    density: float = 512.0
    tol: float = 1e-8
    degree: Optional[int] = None
    n_lo: Optional[int] = None
    n_hi: Optional[int] = None
    margin: float = 0.02

    @classmethod
    def from_args(cls, args: Any) -> "RunConfig":
        """Fill unset knobs from the global config"""
        return cls(
            command=args.command,
            input=args.input,
            output=args.output,
            N=args.N,
            n=args.n,
            m_lo=args.m_lo,
            m_hi=args.m_hi,
            n_max=args.n_max,
            seed=config.seed if args.seed is None else args.seed,
            density=float(config.density if args.density is None else args.density),
            tol=float(config.quad_tol if args.tol is None else args.tol),
            degree=args.degree,
            n_lo=args.n_lo,
            n_hi=args.n_hi,
            margin=float(config.margin if args.margin is None else args.margin),
        )

    def validate(self) -> None:
        """
        Valider knotter mot underkommandoens forutsetninger

        Raises:
            UsageError: Hvis en knott er utenfor gyldig område
        """
        if self.input is None:
            raise UsageError("Mangler --input", field="input")
        validate_range("n", self.n, 1)
        validate_range("m-lo", self.m_lo, 0)
        validate_range("m-hi", self.m_hi, self.m_lo)
        validate_range("tol", self.tol, 1e-15)
        validate_range("margin", self.margin, 1e-6, 0.999)
        if self.N is not None:
            validate_range("N", self.N, 0)
        if self.degree is not None:
            validate_range("degree", self.degree, 0)
        if self.n_lo is not None:
            validate_range("n-lo", self.n_lo, 0)
        if self.n_hi is not None:
            validate_range("n-hi", self.n_hi, 0 if self.n_lo is None else self.n_lo)
        if self.command in ("capacity", "iota-check"):
            validate_range("n-max", self.n_max, 2)
        if self.command in ("capacity", "iota-check", "contour-bound"):
            validate_range("density", self.density, config.min_density)
        if self.command == "reconstruct" and self.degree is None:
            raise UsageError("reconstruct krever --degree", field="degree")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
