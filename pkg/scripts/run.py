# Command-line entry point: python scripts/run.py <subcommand> [options]
import os
import sys

# engine/ lives beside scripts/; LSM_PROJECT_ROOT only moves squares/ and suites/.
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from engine.cli import run  # noqa: E402


def main():
	return run(sys.argv[1:])

if __name__ == "__main__":
	sys.exit(main())
