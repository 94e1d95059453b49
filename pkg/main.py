#!/usr/bin/env python3
"""
Main entry point for the RIS passive radar toolkit.
Lists the available commands; the work itself is done by ``src.cli``.
"""

import sys


def show_available_commands():
    """Display available commands."""
    print("📡 RIS Passive Radar Toolkit")
    print("=" * 50)
    print()
    print("🚀 Available Commands:")
    print()

    commands = [
        ("uv run ris-radar spectrum --config configs/k4.cfg", "Spectrum of the four-target scene"),
        ("uv run ris-radar spectrum --per-epoch", "Sequential spectrum after every epoch"),
        ("uv run ris-radar sweep-snr --m 16,32,0 --out snr.csv", "Metrics against SNR"),
        ("uv run ris-radar sweep-targets --out targets.csv", "Metrics against target count"),
        ("uv run ris-radar sweep-separation --out sep.csv", "Metrics against separation"),
        ("uv run ris-radar scene scene.cfg", "Draw and save a random scene"),
        ("uv run ris-radar selftest", "Run the invariant checks"),
        ("uv run ris-radar config --create", "Create default configuration"),
        ("uv run pytest -m 'not slow'", "Run the fast test suite"),
        ("uv run ruff check src/", "Lint code with Ruff"),
    ]

    for cmd, description in commands:
        print(f"  {cmd:<55} # {description}")
    print()


def main():
    """Main entry point."""
    if len(sys.argv) > 1 and sys.argv[1] == "--commands":
        show_available_commands()
        return

    print("📡 RIS Passive Radar Toolkit")
    print("=" * 40)
    print()
    print("Simulates an RIS-aided passive radar and localizes targets with batch or sequential NLMS.")
    print()
    print("📚 Quick Commands:")
    print("  python main.py --commands       # Show all available commands")
    print("  uv run ris-radar --help         # CLI help")
    print()
    print("📖 For full documentation, see README.md")


if __name__ == "__main__":
    main()
