from rich.console import Console
from sympy import isprime

from .__version__ import __version__

DEBUG = False

console = Console()

CONFIG_FILE = "config.ini"
CONFIG_SECTION = "tatesmith"

PRIME = 3
WINDOW_LO = -1
WINDOW_HI = 2
SEED = 0
STABILIZATION_CHECKS = 2
SAMPLES = 10
MAX_ENUMERATION = 100000

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_CROSS_CHECK = 3

TOOL_NAME = f"tatesmith/{__version__}"

COMMANDS = [
    "tate",
    "classify",
    "perfect",
    "stablehom",
    "smith",
    "parity-check",
    "tate-parity-check",
    "decompose",
    "reduce-compare",
    "lift",
    "hyperco-check",
    "simp-smith",
    "export-poset",
    "demo-gr-weights",
]

# commands taking two input documents
BINARY_COMMANDS = ["stablehom", "reduce-compare"]

WINDOW_COMMANDS = ["tate"]

EXAMPLE_SPACES = ["point", "polygon", "suspension", "triangle", "chain2"]


def debug(message: str) -> None:
    if DEBUG:
        console.print(f"[dim]{message}[/dim]")


def is_odd_prime(p: int) -> bool:
    return p % 2 == 1 and isprime(p)
