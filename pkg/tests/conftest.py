import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from muser.corpus import Paragraph, write_store
from muser.embedding import BackendDescriptor


@pytest.fixture
def hashed_backend():
    return BackendDescriptor(kind="hashed", dim=256, seed=0)


@pytest.fixture
def small_store(tmp_path):
    paragraphs = [
        Paragraph("alpha", 0, "Alpha", "the quick brown fox jumps over the lazy dog"),
        Paragraph("alpha", 1, "Alpha", "foxes are small wild canines found worldwide"),
        Paragraph("beta", 0, "Beta", "glaciers carve valleys over thousands of years"),
    ]
    path = tmp_path / "paragraphs.jsonl"
    write_store(path, paragraphs)
    return path, paragraphs


class _JsonHandler(BaseHTTPRequestHandler):
    routes: dict = {}

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        try:
            body = json.loads(self.rfile.read(length) or b"{}")
        except json.JSONDecodeError:
            body = {}
        handler = self.routes.get(self.path)
        if handler is None:
            self.send_error(404)
            return
        status, resp = handler(body)
        data = json.dumps(resp).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def http_stub():
    """Start throwaway JSON servers: http_stub({path: fn(body) -> (status, dict)})."""
    servers = []

    def make(routes):
        handler = type("Handler", (_JsonHandler,), {"routes": routes})
        server = ThreadingHTTPServer(("127.0.0.1", 0), handler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_address[1]}"

    yield make
    for server in servers:
        server.shutdown()
