# hamlim/core/config.py
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Global toolkit configuration.

    Values are loaded from environment variables (or a local `.env` file) at
    runtime. CLI flags take precedence over everything defined here.

    These settings are used for:
    - default seeding of every Monte Carlo / sampling command
    - numerical tolerances shared by the linear-algebra services
    - desk-scale dimension guards for the generated instances
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    APP_NAME: str = "hamlim"
    APP_ENV: str = Field("local", description="Environment name: local/ci")

    HAMLIM_SEED: int = Field(
        default=0,
        ge=0,
        lt=2**64,
        description="Default 64-bit master seed for seeded commands.",
    )
    HAMLIM_LOG_LEVEL: str = Field(
        default="WARNING",
        description="Logging level for the CLI (DEBUG/INFO/WARNING/ERROR).",
    )

    # --- numerical tolerances ---
    HERMITIAN_ASYMMETRY_TOL: float = Field(
        default=1e-12,
        description=(
            "Inputs whose max|H - H^dagger| is within this value are symmetrized "
            "to (H + H^dagger)/2; larger asymmetry is rejected."
        ),
    )
    EIGH_RESIDUAL_FACTOR: float = Field(
        default=1e-10,
        description="Eigendecomposition residual bound, multiplied by n * ||H||.",
    )
    EIGH_UNITARITY_TOL: float = Field(
        default=1e-10,
        description="Bound on max|V^dagger V - I| for accepted eigenvector matrices.",
    )
    CHAIN_RELATIVE_SLACK: float = Field(
        default=1e-9,
        description="Negative relative slack tolerated before an inequality is marked violated.",
    )
    SLACK_FLOOR: float = Field(
        default=1e-12,
        description="Absolute floor of the relative-slack denominator for near-zero norms.",
    )

    # --- desk-scale guards ---
    DENSE_DIMENSION_CAP: int = Field(
        default=4096,
        description="Largest dimension 2N(N+1) allowed for the dense parity Hamiltonian.",
    )
    HADAMARD_MAX_QUBITS: int = Field(
        default=12,
        description="Largest n accepted for the Hadamard tensor power R^{(x)n}.",
    )
    TAIL_WORKERS: int = Field(
        default=1,
        ge=1,
        description="Worker threads used for Monte Carlo tail trials.",
    )


@lru_cache()
def get_settings() -> Settings:
    """
    Cached accessor for toolkit settings.

    Settings are read and validated once per process; tests replace this
    accessor with monkeypatch when they need different tolerances.
    """
    return Settings()
