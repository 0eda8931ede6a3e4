"""
Script-mode runner shared by tests/test_*.py

pytest collects the test_* functions directly; `python tests/test_fans.py`
runs them through run_module and prints a coloured summary.
"""

import os
import sys
import time
import traceback

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src'))


# Colors
class Colors:
    GREEN = '\033[92m'
    RED = '\033[91m'
    YELLOW = '\033[93m'
    CYAN = '\033[96m'
    BOLD = '\033[1m'
    END = '\033[0m'


class TestResult:
    #Resultado de um teste
    __test__ = False

    def __init__(self, name):
        self.name = name
        self.success = False
        self.latency_ms = 0
        self.error = None


def run_one(name, func):
    result = TestResult(name)
    start = time.time()
    try:
        func()
        result.success = True
    except AssertionError as e:
        result.error = str(e) or traceback.format_exc(limit=2).strip().splitlines()[-1]
    except Exception as e:
        result.error = f"{type(e).__name__}: {e}"
    result.latency_ms = (time.time() - start) * 1000
    return result


def run_module(title, namespace):
    tests = [(name, func) for name, func in namespace.items() if name.startswith('test_') and callable(func)]

    print(f"\n{Colors.BOLD}{Colors.CYAN}{'=' * 80}{Colors.END}")
    print(f"{Colors.BOLD}{Colors.CYAN}{title}{Colors.END}")
    print(f"{Colors.BOLD}{Colors.CYAN}{'=' * 80}{Colors.END}\n")

    results = []
    for name, func in tests:
        result = run_one(name, func)
        results.append(result)
        if result.success:
            print(f"{Colors.GREEN}✅ {name:60} {result.latency_ms:8.0f}ms{Colors.END}")
        else:
            print(f"{Colors.RED}❌ {name:60} {result.error}{Colors.END}")

    failed = sum(1 for r in results if not r.success)
    total = len(results)
    color = Colors.GREEN if not failed else Colors.RED
    print(f"\n{color}{Colors.BOLD}{total - failed}/{total} passed{Colors.END}")
    return 0 if not failed else 1
