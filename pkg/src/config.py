"""
Configuration settings for the r-division toolkit.

Manages environment variables, division constants and experiment defaults.
"""

import math
import os
from fractions import Fraction
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Config:
    """Application configuration"""

    # Division constants
    C0: Fraction = Fraction(os.getenv("RDIV_C0", "4"))
    BALANCE: Fraction = Fraction(os.getenv("RDIV_BALANCE", "3/4"))
    SEED: int = int(os.getenv("RDIV_SEED", "0"))
    R0: int = int(os.getenv("RDIV_R0", "16"))
    PROGRESS_FLOOR: int = int(os.getenv("RDIV_PROGRESS_FLOOR", "12"))
    REGION_CEILING: Fraction = Fraction(os.getenv("RDIV_REGION_CEILING", "48"))

    # Separator
    C1_CEILING: float = float(os.getenv("RDIV_C1_CEILING", str(8 * math.sqrt(2))))
    SEPARATOR_ROOTS: int = int(os.getenv("RDIV_SEPARATOR_ROOTS", "4"))

    # Incidence constructions
    FORBID_CAP: int = int(os.getenv("RDIV_FORBID_CAP", "14"))
    CODEGREE_SLACK: float = float(os.getenv("RDIV_CODEGREE_SLACK", "4"))
    CODEGREE_LOG_POWER: float = float(os.getenv("RDIV_CODEGREE_LOG_POWER", "1"))
    C_K: float = float(os.getenv("RDIV_C_K", "1"))
    TRUNCATION_C: Fraction = Fraction(os.getenv("RDIV_TRUNCATION_C", "4"))
    HYPERGRAPH_COPY_CAP: int = int(os.getenv("RDIV_HYPERGRAPH_COPY_CAP", "20000"))

    # Experiment constants
    C4: float = float(os.getenv("RDIV_C4", "1"))
    C5: float = float(Fraction(os.getenv("RDIV_C5", "1/64")))
    C6: float = float(Fraction(os.getenv("RDIV_C6", "1/4")))

    # Output
    OUTPUT_DIR: str = os.getenv("RDIV_OUTPUT_DIR", "output")

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    @classmethod
    def validate(cls) -> bool:
        """Validate configuration settings"""
        problems = []
        if cls.C0 <= 0:
            problems.append("RDIV_C0 must be positive")
        if not Fraction(1, 2) <= cls.BALANCE < 1:
            problems.append("RDIV_BALANCE must lie in [1/2, 1)")
        if cls.R0 < 1:
            problems.append("RDIV_R0 must be at least 1")
        if cls.FORBID_CAP < 1:
            problems.append("RDIV_FORBID_CAP must be at least 1")
        for problem in problems:
            print(f"Warning: {problem}")
        return not problems
