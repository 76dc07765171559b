#!/usr/bin/env python3
"""
Run the ssb-sectors test suite with common configurations.
"""

import argparse
import subprocess
import sys
from pathlib import Path


def run_command(cmd, check=True):
    """Run a command, echoing it first."""
    print(f"🔧 Running: {' '.join(cmd)}")
    try:
        return subprocess.run(cmd, check=check, text=True)
    except subprocess.CalledProcessError as e:
        print(f"❌ Command failed: {e}")
        sys.exit(1)
    except FileNotFoundError as e:
        print(f"⚠️  Tool not available: {e}")
        return None


def lint():
    for name, cmd in (("Ruff", ['ruff', 'check', 'src', 'tests']),
                      ("Black", ['black', '--check', 'src', 'tests']),
                      ("MyPy", ['mypy', 'src'])):
        result = run_command(cmd, check=False)
        if result is not None and result.returncode == 0:
            print(f"✅ {name}: OK")
        else:
            print(f"⚠️  {name} unavailable or reported problems")


def main():
    parser = argparse.ArgumentParser(description='ssb-sectors test runner')
    parser.add_argument('--type', '-t', choices=['unit', 'integration', 'slow', 'all'], default='all')
    parser.add_argument('--coverage', '-c', action='store_true', help='coverage report for src/')
    parser.add_argument('--html', action='store_true', help='HTML coverage report')
    parser.add_argument('--fast', '-f', action='store_true', help='skip tests marked slow')
    parser.add_argument('--verbose', '-v', action='store_true')
    parser.add_argument('--parallel', '-p', action='store_true', help='pytest-xdist workers')
    parser.add_argument('--lint', action='store_true', help='only run ruff, black and mypy')
    parser.add_argument('--install-deps', action='store_true')
    args = parser.parse_args()

    if not Path('sectors.py').exists():
        print("❌ Run this script from the repository root")
        sys.exit(1)

    if args.install_deps:
        print("📦 Installing dependencies...")
        run_command([sys.executable, '-m', 'pip', 'install', '-r', 'requirements-dev.txt'])

    if args.lint:
        lint()
        return

    pytest_cmd = [sys.executable, '-m', 'pytest']
    if args.type == 'unit':
        pytest_cmd.append('tests/unit')
    elif args.type == 'integration':
        pytest_cmd.append('tests/integration')
    elif args.type == 'slow':
        pytest_cmd.extend(['tests/', '-m', 'slow'])
    else:
        pytest_cmd.append('tests/')

    pytest_cmd.append('-v' if args.verbose else '-q')
    if args.fast and args.type != 'slow':
        pytest_cmd.extend(['-m', 'not slow'])
    if args.parallel:
        pytest_cmd.extend(['-n', 'auto'])
    if args.coverage:
        pytest_cmd.extend(['--cov=src', '--cov-report=term-missing'])
        if args.html:
            pytest_cmd.append('--cov-report=html:htmlcov')

    print(f"🧪 Running tests: {args.type}")
    result = run_command(pytest_cmd, check=False)
    if result is not None and result.returncode == 0:
        print("🎉 All tests passed!")
        if args.html and Path('htmlcov/index.html').exists():
            print(f"   • Coverage: file://{Path('htmlcov/index.html').absolute()}")
    else:
        print("❌ Some tests failed!")
        sys.exit(1)


if __name__ == '__main__':
    main()
