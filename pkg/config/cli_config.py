"""
CLI-specific configuration and text constants
"""

# Application Info
APP_TITLE = "Frame Operator Toolkit"
APP_DESCRIPTION = (
    "Build analysis, synthesis, frame and Gram operators of vector sequences, "
    "classify sequences by each operator, and reproduce the counterexample gallery."
)

# Verb help texts
VERB_HELP = {
    "classify": "Classify a finite sequence (--input) or a gallery fixture (--fixture).",
    "operators": "Print the four operators of a finite sequence and their identity residuals.",
    "gallery": "Verify and dump the fixture gallery.",
    "probe": "Probe domain membership of a coefficient sequence for a fixture.",
    "transform": "Apply an operator to a sequence and check the predicted bounds.",
    "factorize": "Factor a sequence through the canonical basis and read off its class.",
}

# Flag help texts
COEFF_CHOICES_HELP = "delta1 | zeros | e1 | harmonic-alt | harmonic | quarter-geometric | custom:PATH"
LEVELS_HELP = "Comma-separated truncation levels, e.g. 64,256,1024,4096"

# Exit codes
EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
