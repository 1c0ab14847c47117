import os
import textwrap
import configparser
from typing import Optional, List
from xdg_base_dirs import xdg_config_home

from . import constants
from .constants import (
    CONFIG_FILE,
    CONFIG_SECTION,
    MAX_ENUMERATION,
    PRIME,
    SAMPLES,
    SEED,
    STABILIZATION_CHECKS,
    WINDOW_HI,
    WINDOW_LO,
    is_odd_prime,
)


class TateSmithConfig:
    def __init__(
        self,
        config_path: Optional[str] = None,
        config_file: Optional[str] = None,
        skip_config_creation: bool = False,
    ) -> None:
        if config_path:
            self.config_path = config_path
        else:
            self.config_path = os.path.join(xdg_config_home(), "tatesmith")

        if config_file:
            self.config_file = config_file
        else:
            self.config_file = os.path.join(self.config_path, CONFIG_FILE)

        if not os.path.exists(self.config_file):
            if not skip_config_creation:
                self.create_config_file()

        self.load_config()

    def create_config_file(self) -> None:
        file = os.path.join(self.config_path, self.config_file)
        constants.console.print(f"[dim]creating initial configuration file {file}[/dim]")

        if not os.path.isdir(self.config_path):
            os.makedirs(self.config_path)

        default_config = textwrap.dedent(
            f"""
            [{CONFIG_SECTION}]
            # prime = {PRIME}
            # window = {WINDOW_LO} {WINDOW_HI}
            # seed = {SEED}
            # stabilization_checks = {STABILIZATION_CHECKS}
            # samples = {SAMPLES}
            # max_enumeration = {MAX_ENUMERATION}
            # json = false
            # no_color = false
            # debug = false
        """
        ).split("\n", 1)[1:][0]

        try:
            with open(file, "w") as f:
                f.write(default_config)
        except OSError as e:
            constants.console.print(f"[red]Error:[/red] Could not write config file: {e}")

    def _value(self, parser: configparser.ConfigParser, key: str) -> Optional[str]:
        if CONFIG_SECTION in parser and key in parser[CONFIG_SECTION]:
            return parser[CONFIG_SECTION][key]
        return None

    def _fallback(self, key: str, default: object, error: Exception) -> None:
        constants.console.print(
            f'[red]Error:[/red] unable to set value for "{key}", using default setting "{default}". [dim]{error}[/dim]'
        )

    def get_config_list(
        self, parser: configparser.ConfigParser, key: str, default: Optional[List[str]]
    ) -> Optional[List[str]]:
        entry = self._value(parser, key)
        if entry is None:
            return default
        if "," in entry:
            items = [e.strip() for e in entry.strip().split(",")]
        else:
            items = entry.strip().split()
        return items if items and items != [""] else default

    def get_config_str(
        self, parser: configparser.ConfigParser, key: str, default: Optional[str]
    ) -> Optional[str]:
        entry = self._value(parser, key)
        return entry if entry is not None else default

    def get_config_int(
        self, parser: configparser.ConfigParser, key: str, default: int
    ) -> int:
        try:
            entry = self._value(parser, key)
            return int(entry) if entry is not None else default
        except ValueError as ve:
            self._fallback(key, default, ve)
            return default

    def get_config_bool(
        self, parser: configparser.ConfigParser, key: str, default: bool
    ) -> bool:
        try:
            if self._value(parser, key) is None:
                return default
            return parser[CONFIG_SECTION].getboolean(key)
        except ValueError as ve:
            self._fallback(key, default, ve)
            return default

    def get_config_window(
        self, parser: configparser.ConfigParser, key: str, default: List[int]
    ) -> List[int]:
        entry = self.get_config_list(parser, key, None)
        if entry is None:
            return default
        try:
            lo, hi = (int(x) for x in entry)
            return [lo, hi]
        except ValueError as ve:
            self._fallback(key, " ".join(str(x) for x in default), ve)
            return default

    @classmethod
    def validate_prime(cls, p: int) -> bool:
        if not is_odd_prime(p):
            constants.console.print(f"[red]Error:[/red] p = {p} is not an odd prime.")
            return False
        return True

    def load_config(self) -> None:
        parser = configparser.ConfigParser()

        if os.path.exists(self.config_file):
            try:
                parser.read(self.config_file)
            except configparser.Error as e:
                constants.console.print(f"[red]Error:[/red] unable to read {self.config_file}. [dim]{e}[/dim]")

        self.prime = self.get_config_int(parser, "prime", PRIME)
        if not is_odd_prime(self.prime):
            self._fallback("prime", PRIME, ValueError(f"{self.prime} is not an odd prime"))
            self.prime = PRIME
        self.window = self.get_config_window(parser, "window", [WINDOW_LO, WINDOW_HI])
        self.seed = self.get_config_int(parser, "seed", SEED)
        self.stabilization_checks = self.get_config_int(
            parser, "stabilization_checks", STABILIZATION_CHECKS
        )
        self.samples = self.get_config_int(parser, "samples", SAMPLES)
        self.max_enumeration = self.get_config_int(
            parser, "max_enumeration", MAX_ENUMERATION
        )
        self.json = self.get_config_bool(parser, "json", False)
        self.no_color = self.get_config_bool(parser, "no_color", False)
        self.debug = self.get_config_bool(parser, "debug", False)
