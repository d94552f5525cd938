"""TCP sender and receiver exchanging encrypted envelopes.

Every frame is a 4-byte big-endian length followed by a binary envelope.
The receiver decrypts each frame, logs the plaintext and answers with an
encrypted ``OK:<length>``; bad frames get an encrypted ``ERR:<NAME>`` reply
and the connection stays open, except for oversize frames, which close it.

Keys travel in-band by default. With ``external_keys`` both ends share a
fixed schedule and envelopes carry none.
"""

from __future__ import annotations

import logging
import socket
import socketserver
import struct
import threading
from collections.abc import Callable

from asciisub.cipher import KeySchedule, derive_keys, encrypt
from asciisub.codec import PAPER, CodecConfig
from asciisub.envelope import KeyTransport, decode_binary, encode_binary, seal, unseal
from asciisub.errors import (
    AsubError,
    ConnectionFailed,
    FrameTooLarge,
    ModeMismatch,
    ProtocolError,
    RemoteError,
    Timeout,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_FRAME = 1 << 20
DEFAULT_TIMEOUT = 5.0
_LEN = struct.Struct(">I")


# framing


def encode_frame(payload: bytes, max_size: int = DEFAULT_MAX_FRAME) -> bytes:
    if len(payload) > max_size:
        raise FrameTooLarge(f"payload of {len(payload)} bytes exceeds {max_size}")
    return _LEN.pack(len(payload)) + payload


def decode_frame(buf: bytes, max_size: int = DEFAULT_MAX_FRAME) -> tuple[bytes, bytes]:
    """Split one frame off the front of ``buf``; returns ``(payload, rest)``."""
    if len(buf) < _LEN.size:
        raise ProtocolError(f"frame header needs {_LEN.size} bytes, got {len(buf)}")
    (length,) = _LEN.unpack_from(buf)
    if length > max_size:
        raise FrameTooLarge(f"frame announces {length} bytes, limit is {max_size}")
    end = _LEN.size + length
    if len(buf) < end:
        raise ProtocolError(f"frame announces {length} bytes, only {len(buf) - _LEN.size} present")
    return bytes(buf[_LEN.size : end]), bytes(buf[end:])


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    chunks = []
    remaining = n
    while remaining:
        chunk = sock.recv(min(remaining, 65536))
        if not chunk:
            break
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


def read_frame(sock: socket.socket, max_size: int = DEFAULT_MAX_FRAME) -> bytes | None:
    """Read one frame; None on a clean end of stream before any header byte."""
    header = _recv_exact(sock, _LEN.size)
    if not header:
        return None
    if len(header) < _LEN.size:
        raise ProtocolError("stream ended inside a frame header")
    (length,) = _LEN.unpack(header)
    if length > max_size:
        raise FrameTooLarge(f"frame announces {length} bytes, limit is {max_size}")
    payload = _recv_exact(sock, length)
    if len(payload) < length:
        raise ProtocolError(f"stream ended after {len(payload)} of {length} payload bytes")
    return payload


# messages


def seal_message(text: str, config: CodecConfig = PAPER, external_keys: KeySchedule | None = None) -> bytes:
    if external_keys is None:
        schedule = derive_keys(text, config)
        transport = KeyTransport.IN_BAND
    else:
        schedule = external_keys
        transport = KeyTransport.EXTERNAL
    return encode_binary(seal(encrypt(text, schedule, config), schedule, transport))


def open_message(payload: bytes, config: CodecConfig = PAPER, external_keys: KeySchedule | None = None) -> str:
    env = decode_binary(payload)
    if env.mode_name != config.mode_name:
        raise ModeMismatch(f"envelope is {env.mode_name!r}, expected {config.mode_name!r}")
    return unseal(env, external_keys)


def error_reply(exc: BaseException) -> str:
    return "ERR:" + type(exc).__name__.upper()


# server


class _Handler(socketserver.BaseRequestHandler):
    server: CipherServer

    def handle(self) -> None:
        srv = self.server
        sock: socket.socket = self.request
        srv._track(sock, add=True)
        try:
            while True:
                try:
                    payload = read_frame(sock, srv.max_frame)
                except FrameTooLarge as exc:
                    log.warning("%s: %s", self.client_address, exc)
                    self._reply(error_reply(exc))
                    return
                except (ProtocolError, OSError) as exc:
                    log.info("%s: dropping connection: %s", self.client_address, exc)
                    return
                if payload is None:
                    return
                try:
                    text = open_message(payload, srv.config, srv.external_keys)
                except AsubError as exc:
                    log.warning("%s: bad message: %s", self.client_address, exc)
                    self._reply(error_reply(exc))
                    continue
                log.info("%s: received %d characters: %s", self.client_address, len(text), text)
                if srv.on_message is not None:
                    srv.on_message(text)
                self._reply(f"OK:{len(text)}")
        finally:
            srv._track(sock, add=False)

    def _reply(self, text: str) -> None:
        srv = self.server
        try:
            self.request.sendall(encode_frame(seal_message(text, srv.config, srv.external_keys)))
        except OSError as exc:
            log.info("%s: reply failed: %s", self.client_address, exc)


class CipherServer(socketserver.ThreadingTCPServer):
    """Threaded receiver; bind to port 0 and read ``server_address`` for an ephemeral port."""

    allow_reuse_address = True
    daemon_threads = False
    block_on_close = True

    def __init__(
        self,
        address: tuple[str, int],
        config: CodecConfig = PAPER,
        *,
        external_keys: KeySchedule | None = None,
        max_frame: int = DEFAULT_MAX_FRAME,
        on_message: Callable[[str], None] | None = None,
    ):
        self.config = config
        self.external_keys = external_keys
        self.max_frame = max_frame
        self.on_message = on_message
        self._open: set[socket.socket] = set()
        self._open_lock = threading.Lock()
        super().__init__(address, _Handler)

    def _track(self, sock: socket.socket, add: bool) -> None:
        with self._open_lock:
            (self._open.add if add else self._open.discard)(sock)

    def server_close(self) -> None:
        # Stop reading on idle connections so handler threads can be joined;
        # replies already being written still go out.
        with self._open_lock:
            for sock in self._open:
                try:
                    sock.shutdown(socket.SHUT_RD)
                except OSError:
                    pass
        super().server_close()


def serve(
    port: int,
    config: CodecConfig = PAPER,
    *,
    host: str = "127.0.0.1",
    external_keys: KeySchedule | None = None,
    max_frame: int = DEFAULT_MAX_FRAME,
    ready: Callable[[CipherServer], None] | None = None,
) -> None:
    """Run a receiver until interrupted."""
    with CipherServer((host, port), config, external_keys=external_keys, max_frame=max_frame) as server:
        log.info("listening on %s:%d (%s mode)", *server.server_address[:2], config.mode_name)
        if ready is not None:
            ready(server)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            log.info("shutting down")


# client


def parse_address(address: str | tuple[str, int]) -> tuple[str, int]:
    if isinstance(address, tuple):
        return address
    host, sep, port = address.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"address must be HOST:PORT, got {address!r}")
    return host.strip("[]") or "127.0.0.1", int(port)


def send(
    address: str | tuple[str, int],
    message: str,
    config: CodecConfig = PAPER,
    *,
    external_keys: KeySchedule | None = None,
    timeout: float = DEFAULT_TIMEOUT,
    max_frame: int = DEFAULT_MAX_FRAME,
) -> str:
    """Send one message and return the decrypted acknowledgment."""
    host, port = parse_address(address)
    frame = encode_frame(seal_message(message, config, external_keys), max_frame)
    try:
        sock = socket.create_connection((host, port), timeout=timeout)
    except socket.timeout as exc:
        raise Timeout(f"connecting to {host}:{port} timed out after {timeout}s") from exc
    except OSError as exc:
        raise ConnectionFailed(f"cannot connect to {host}:{port}: {exc}") from exc
    with sock:
        try:
            sock.sendall(frame)
            payload = read_frame(sock, max_frame)
        except socket.timeout as exc:
            raise Timeout(f"no reply from {host}:{port} within {timeout}s") from exc
        except OSError as exc:
            raise ConnectionFailed(f"connection to {host}:{port} failed: {exc}") from exc
    if payload is None:
        raise ProtocolError("server closed the connection without replying")
    try:
        reply = open_message(payload, config, external_keys)
    except AsubError as exc:
        raise ProtocolError(f"unreadable reply: {exc}") from exc
    if reply.startswith("ERR:"):
        raise RemoteError(f"server rejected the message: {reply}")
    return reply
