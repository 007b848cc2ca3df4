"""
Sentralisert konfigurasjonshåndtering for polya-carlson
Settings file (TOML) first, environment variables as fallback, then defaults
"""

import os
import sys

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
from typing import Any, Dict, Optional


SETTINGS_ENV = "POLYA_SETTINGS"
DEFAULT_SETTINGS_FILE = "polya.toml"


class Config:
    """Konfigurasjonsklasse som håndterer settings-fil og miljøvariabler"""

    def __init__(self, settings_path: Optional[str] = None):
        self._settings = self._load_settings(settings_path)

        # App konfigurasjon
        self.app_name = self._get_setting("POLYA_APP_NAME", "app", "name", "polya-carlson")
        self.app_version = self._get_setting("POLYA_APP_VERSION", "app", "version", "1.0.0")
        debug_value = self._get_setting("POLYA_DEBUG_MODE", "app", "debug_mode", "false")
        self.debug_mode = str(debug_value).lower() == "true"
        self.report_dir = self._get_setting("POLYA_REPORT_DIR", "reports", "directory", "reports")

        # Analyse konfigurasjon
        self.seed = int(self._get_setting("POLYA_SEED", "analysis", "seed", 0))
        self.kronecker_n_hi = int(self._get_setting("POLYA_KRONECKER_N_HI", "hankel", "default_n_hi", 12))
        self.evidence_run = int(self._get_setting("POLYA_EVIDENCE_RUN", "restriction", "evidence_run", 3))
        self.sup_min_grid = int(self._get_setting("POLYA_SUP_GRID", "restriction", "min_grid", 64))
        self.fekete_max_sweeps = int(self._get_setting("POLYA_FEKETE_SWEEPS", "capacity", "max_sweeps", 50))
        self.monotone_tol = float(self._get_setting("POLYA_MONOTONE_TOL", "capacity", "monotone_tol", 1e-6))
        self.lawson_iterations = int(self._get_setting("POLYA_LAWSON_ITERATIONS", "capacity", "lawson_iterations", 40))
        self.density = int(self._get_setting("POLYA_DENSITY", "contour", "density", 512))
        self.min_density = int(self._get_setting("POLYA_MIN_DENSITY", "contour", "min_density", 64))
        self.margin = float(self._get_setting("POLYA_MARGIN", "contour", "margin", 0.02))
        self.quad_tol = float(self._get_setting("POLYA_QUAD_TOL", "contour", "quad_tol", 1e-8))
        self.gauss_order = int(self._get_setting("POLYA_GAUSS_ORDER", "contour", "gauss_order", 16))
        self.ode_tol = float(self._get_setting("POLYA_ODE_TOL", "dfinite", "residual_target", 1e-10))
        self.taylor_max_degree = int(self._get_setting("POLYA_TAYLOR_DEGREE", "dfinite", "max_degree", 40))

    def _load_settings(self, settings_path: Optional[str]) -> Dict[str, Any]:
        """Les settings-fil hvis den finnes (ingen feil hvis den mangler)"""
        path = settings_path or os.getenv(SETTINGS_ENV, DEFAULT_SETTINGS_FILE)
        if not os.path.isfile(path):
            return {}
        with open(path, "rb") as handle:
            return tomllib.load(handle)

    def _get_setting(self, env_name: str, section: str = None, key: str = None, default: Any = None) -> Any:
        """
        Hent setting fra settings-fil med fallback til miljøvariabler

        Args:
            env_name: Navn på miljøvariabel (fallback)
            section: Seksjon i settings-filen
            key: Nøkkel i seksjonen
            default: Default verdi hvis setting ikke finnes

        Returns:
            Verdien av setting

        Raises:
            ValueError: Hvis påkrevd setting mangler
        """
        value = None

        # Prøv settings-filen først
        if section and key:
            try:
                value = self._settings[section][key]
            except (KeyError, TypeError):
                pass

        # Fallback til miljøvariabel
        if value is None:
            value = os.getenv(env_name, default)

        if value is None:
            raise ValueError(f"Påkrevd setting mangler: {env_name} (eller {section}.{key})")

        return value

    def as_dict(self) -> Dict[str, Any]:
        """Alle oppløste verdier, brukt som reproduserbarhets-header i rapporter"""
        return {
            'app_name': self.app_name,
            'app_version': self.app_version,
            'seed': self.seed,
            'kronecker_n_hi': self.kronecker_n_hi,
            'evidence_run': self.evidence_run,
            'sup_min_grid': self.sup_min_grid,
            'fekete_max_sweeps': self.fekete_max_sweeps,
            'monotone_tol': self.monotone_tol,
            'lawson_iterations': self.lawson_iterations,
            'density': self.density,
            'min_density': self.min_density,
            'margin': self.margin,
            'quad_tol': self.quad_tol,
            'gauss_order': self.gauss_order,
            'ode_tol': self.ode_tol,
            'taylor_max_degree': self.taylor_max_degree,
        }

    def validate_config(self) -> bool:
        """
        Valider at numeriske innstillinger er i gyldig område

        Returns:
            True hvis alle verdier er gyldige
        """
        return all([
            self.evidence_run >= 1,
            self.sup_min_grid >= 8,
            self.fekete_max_sweeps >= 1,
            self.min_density >= 1,
            self.density >= self.min_density,
            0.0 < self.margin < 1.0,
            self.quad_tol > 0.0,
            self.gauss_order >= 2,
            self.ode_tol > 0.0,
            self.taylor_max_degree >= 2,
        ])


# Global config instance
config = Config()

# Convenience functions
def is_debug_mode():
    """Sjekk om debug mode er aktivert"""
    return config.debug_mode

def get_app_info():
    """Returner app informasjon"""
    return {
        'name': config.app_name,
        'version': config.app_version
    }
