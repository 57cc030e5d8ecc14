"""Launch the sidecar model server as a subprocess for integration tests."""

import socket
import subprocess
import sys
import time
from contextlib import contextmanager

import requests


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@contextmanager
def running_echo_server(timeout: float = 30.0):
    port = _free_port()
    proc = subprocess.Popen(
        [sys.executable, "-m", "model_server", "--host", "127.0.0.1",
         "--port", str(port), "--mode", "echo"],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
    )
    base = f"http://127.0.0.1:{port}"
    try:
        deadline = time.monotonic() + timeout
        while True:
            if proc.poll() is not None:
                out = proc.stdout.read().decode(errors="replace") if proc.stdout else ""
                raise RuntimeError(f"model server exited early:\n{out}")
            try:
                if requests.get(f"{base}/health", timeout=1).status_code == 200:
                    break
            except requests.RequestException:
                pass
            if time.monotonic() > deadline:
                raise TimeoutError("model server did not come up")
            time.sleep(0.1)
        yield base
    finally:
        proc.terminate()
        try:
            proc.wait(timeout=10)
        except subprocess.TimeoutExpired:
            proc.kill()
