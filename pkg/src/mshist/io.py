"""Reading radiance maps (Radiance RGBE, PFM) and writing 8-bit results (PNG, PPM)."""

from __future__ import annotations

import enum
import io as _io
import math
import re
import warnings
from pathlib import Path

import numpy as np
from PIL import Image

from .core import DISPLAY_MAX, WdrImage


class ImageFormatError(ValueError):
    """Malformed image file. ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class BadMagicError(ImageFormatError):
    pass


class UnsupportedFormatError(ImageFormatError):
    pass


class TruncatedDataError(ImageFormatError):
    pass


class CorruptRunError(ImageFormatError):
    pass


class DimensionError(ImageFormatError):
    pass


class ClampedSamplesWarning(UserWarning):
    def __init__(self, count: int):
        super().__init__(f"{count} negative samples clamped to 0")
        self.count = count


class ImageFileKind(enum.Enum):
    RADIANCE_HDR = "radiance_hdr"
    PFM = "pfm"
    PNG = "png"
    PPM = "ppm"


PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def detect_kind(data: bytes) -> ImageFileKind:
    if data.startswith(b"#?RADIANCE") or data.startswith(b"#?RGBE"):
        return ImageFileKind.RADIANCE_HDR
    if data[:2] in (b"PF", b"Pf") and data[2:3].isspace():
        return ImageFileKind.PFM
    if data.startswith(PNG_MAGIC):
        return ImageFileKind.PNG
    if data[:2] == b"P6" and data[2:3].isspace():
        return ImageFileKind.PPM
    raise BadMagicError("unrecognised image signature", 0)


# --- Radiance RGBE -------------------------------------------------------

_RESOLUTION = re.compile(rb"^([-+])([XY]) +(\d+) +([-+])([XY]) +(\d+)$")


def _read_line(data: bytes, pos: int) -> tuple[bytes, int]:
    end = data.find(b"\n", pos)
    if end < 0:
        raise TruncatedDataError("header ends before the resolution line", len(data))
    return data[pos:end], end + 1


def rgbe_to_float(rgbe: np.ndarray) -> np.ndarray:
    """Decode ``(..., 4)`` RGBE bytes with the ``(m + 0.5) / 256 * 2**(e - 128)`` rule."""
    rgbe = np.asarray(rgbe, dtype=np.uint8)
    e = rgbe[..., 3].astype(np.int32)
    scale = np.where(e > 0, np.ldexp(1.0, e - 136), 0.0)
    return (rgbe[..., :3] + 0.5) * scale[..., None]


def float_to_rgbe(rgb: np.ndarray) -> np.ndarray:
    rgb = np.asarray(rgb, dtype=np.float64)
    v = rgb.max(axis=-1)
    mant, exp = np.frexp(v)
    exp = np.clip(exp, -127, 127)
    tiny = v < 1e-32
    scale = np.where(tiny, 0.0, np.ldexp(256.0, -exp))
    m = np.clip(np.floor(rgb * scale[..., None]), 0, 255)
    out = np.empty(rgb.shape[:-1] + (4,), dtype=np.uint8)
    out[..., :3] = m
    out[..., 3] = np.where(tiny, 0, exp + 128)
    return out


def _decode_scanline(data: bytes, pos: int, length: int) -> tuple[np.ndarray, int]:
    """One scanline as ``(length, 4)`` RGBE bytes, plus the next read position."""
    if 8 <= length <= 0x7FFF and data[pos:pos + 2] == b"\x02\x02" and data[pos + 2] < 128:
        encoded = (data[pos + 2] << 8) | data[pos + 3]
        if encoded != length:
            raise CorruptRunError(f"scanline length {encoded} != image width {length}", pos)
        pos += 4
        line = np.empty((4, length), dtype=np.uint8)
        for ch in range(4):
            x = 0
            while x < length:
                if pos >= len(data):
                    raise TruncatedDataError("scanline ends early", pos)
                count = data[pos]
                if count > 128:
                    count -= 128
                    if x + count > length or pos + 1 >= len(data):
                        raise CorruptRunError("run overruns scanline", pos)
                    line[ch, x:x + count] = data[pos + 1]
                    pos += 2
                else:
                    if count == 0 or x + count > length:
                        raise CorruptRunError("bad literal count", pos)
                    if pos + 1 + count > len(data):
                        raise TruncatedDataError("scanline ends early", pos)
                    line[ch, x:x + count] = np.frombuffer(data, np.uint8, count, pos + 1)
                    pos += 1 + count
                x += count
        return line.T, pos
    n = 4 * length
    if pos + n > len(data):
        raise TruncatedDataError("scanline ends early", pos)
    return np.frombuffer(data, np.uint8, n, pos).reshape(length, 4), pos + n


def read_radiance_hdr(data: bytes) -> WdrImage:
    if not (data.startswith(b"#?RADIANCE") or data.startswith(b"#?RGBE")):
        raise BadMagicError("missing #?RADIANCE / #?RGBE signature", 0)
    _, pos = _read_line(data, 0)
    fmt = None
    exposure = 1.0
    while True:
        start = pos
        line, pos = _read_line(data, pos)
        line = line.strip()
        if not line:
            break
        if line.startswith(b"#"):
            continue
        key, _, value = line.partition(b"=")
        if key == b"FORMAT":
            fmt = value.strip()
            if fmt != b"32-bit_rle_rgbe":
                raise UnsupportedFormatError(f"FORMAT={fmt.decode(errors='replace')}", start)
        elif key == b"EXPOSURE":
            try:
                exposure *= float(value)
            except ValueError:
                raise ImageFormatError("unreadable EXPOSURE value", start) from None
    if fmt is None:
        raise UnsupportedFormatError("header lacks FORMAT=32-bit_rle_rgbe", pos)
    if not (exposure > 0 and math.isfinite(exposure)):
        raise ImageFormatError("EXPOSURE must be positive", pos)

    start = pos
    line, pos = _read_line(data, pos)
    m = _RESOLUTION.match(line.strip())
    if not m or m.group(2) == m.group(5):
        raise ImageFormatError("bad resolution line", start)
    sign1, axis1, n1, sign2, axis2, n2 = m.groups()
    n1, n2 = int(n1), int(n2)
    if n1 < 1 or n2 < 1:
        raise DimensionError("empty image", start)

    rgbe = np.empty((n1, n2, 4), dtype=np.uint8)
    for i in range(n1):
        rgbe[i], pos = _decode_scanline(data, pos, n2)

    # Canonical layout is "-Y h +X w": rows top to bottom, columns left to right.
    if (axis1 == b"Y") == (sign1 == b"+"):
        rgbe = rgbe[::-1]
    if (axis2 == b"X") == (sign2 == b"-"):
        rgbe = rgbe[:, ::-1]
    if axis1 == b"X":
        rgbe = rgbe.transpose(1, 0, 2)
    return WdrImage(rgbe_to_float(rgbe) / exposure)


def _rle_channel(row: np.ndarray) -> bytes:
    out = bytearray()
    n, x = len(row), 0
    while x < n:
        run = 1
        while x + run < n and run < 127 and row[x + run] == row[x]:
            run += 1
        if run >= 4:
            out += bytes((128 + run, row[x]))
            x += run
            continue
        # Literal span up to the next run of four or more.
        start = x
        while x < n and x - start < 128:
            if x + 3 < n and row[x] == row[x + 1] == row[x + 2] == row[x + 3]:
                break
            x += 1
        out.append(x - start)
        out += row[start:x].tobytes()
    return bytes(out)


def write_radiance_hdr(img: WdrImage, rle: bool = True) -> bytes:
    h, w = img.height, img.width
    rgbe = float_to_rgbe(img.pixels)
    out = bytearray(b"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n")
    out += f"-Y {h} +X {w}\n".encode()
    if not rle or not (8 <= w <= 0x7FFF):
        out += rgbe.tobytes()
        return bytes(out)
    for y in range(h):
        out += bytes((2, 2, w >> 8, w & 0xFF))
        for ch in range(4):
            out += _rle_channel(rgbe[y, :, ch])
    return bytes(out)


# --- PFM ------------------------------------------------------------------

_MAX_PFM_PIXELS = 1 << 31


def read_pfm(data: bytes) -> WdrImage:
    """Decode a PFM; grayscale files are copied into all three channels.

    Negative samples are clamped to 0 and reported through a
    ``ClampedSamplesWarning`` carrying the count.
    """
    if data[:2] == b"PF":
        channels = 3
    elif data[:2] == b"Pf":
        channels = 1
    else:
        raise BadMagicError("missing PF / Pf signature", 0)
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise TruncatedDataError("header ends early", pos)
        tokens.append((data[start:pos], start))
    pos += 1  # the single whitespace byte ending the header
    try:
        w, h = int(tokens[0][0]), int(tokens[1][0])
    except ValueError:
        raise ImageFormatError("non-integer dimensions", tokens[0][1]) from None
    try:
        scale = float(tokens[2][0])
    except ValueError:
        raise ImageFormatError("unreadable scale", tokens[2][1]) from None
    if w < 1 or h < 1 or w * h > _MAX_PFM_PIXELS:
        raise DimensionError(f"unsupported dimensions {w}x{h}", tokens[0][1])
    if scale == 0 or not math.isfinite(scale):
        raise ImageFormatError("scale must be finite and non-zero", tokens[2][1])
    count = w * h * channels
    if len(data) - pos < 4 * count:
        raise TruncatedDataError(f"payload holds {len(data) - pos} of {4 * count} bytes", pos)
    dtype = "<f4" if scale < 0 else ">f4"
    a = np.frombuffer(data, dtype, count, pos).reshape(h, w, channels)[::-1].astype(np.float64)
    if channels == 1:
        a = np.repeat(a, 3, axis=2)
    if not np.all(np.isfinite(a)):
        raise ImageFormatError("non-finite sample in payload", pos)
    negative = int(np.count_nonzero(a < 0))
    if negative:
        warnings.warn(ClampedSamplesWarning(negative), stacklevel=2)
        a = np.maximum(a, 0.0)
    return WdrImage(a)


def write_pfm(img: WdrImage, little_endian: bool = True) -> bytes:
    header = f"PF\n{img.width} {img.height}\n{-1.0 if little_endian else 1.0}\n".encode()
    payload = img.pixels[::-1].astype("<f4" if little_endian else ">f4")
    return header + payload.tobytes()


# --- 8-bit display output -----------------------------------------------

def to_bytes(img: np.ndarray) -> np.ndarray:
    """Round display values half away from zero into ``uint8``."""
    a = np.asarray(img, dtype=np.float64)
    if a.size and (not np.all(np.isfinite(a)) or a.min() < 0 or a.max() > DISPLAY_MAX):
        raise ValueError("display samples must lie in [0, 255]")
    return np.floor(a + 0.5).astype(np.uint8)


def write_display(img: np.ndarray, kind: ImageFileKind | str = ImageFileKind.PNG) -> bytes:
    """Encode an ``(h, w, 3)`` (or ``(h, w)`` grey) display image as PNG or binary PPM."""
    kind = ImageFileKind(kind)
    u8 = to_bytes(img)
    if u8.ndim == 2:
        u8 = np.repeat(u8[..., None], 3, axis=2)
    if u8.ndim != 3 or u8.shape[2] != 3:
        raise ValueError(f"expected (h, w, 3) image, got shape {u8.shape}")
    if kind is ImageFileKind.PPM:
        h, w = u8.shape[:2]
        return f"P6\n{w} {h}\n255\n".encode() + u8.tobytes()
    if kind is ImageFileKind.PNG:
        buf = _io.BytesIO()
        Image.fromarray(u8, "RGB").save(buf, format="PNG")
        return buf.getvalue()
    raise ValueError(f"cannot write display images as {kind.value}")


def _read_ppm(data: bytes) -> np.ndarray:
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and (data[pos:pos + 1].isspace() or data[pos:pos + 1] == b"#"):
            if data[pos:pos + 1] == b"#":
                pos = data.find(b"\n", pos)
                if pos < 0:
                    raise TruncatedDataError("header ends early", len(data))
            pos += 1
        start = pos
        while pos < len(data) and data[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise ImageFormatError("bad PPM header", pos)
        fields.append(int(data[start:pos]))
    pos += 1
    w, h, maxval = fields
    if maxval != 255:
        raise UnsupportedFormatError(f"maxval {maxval}", pos)
    if len(data) - pos < 3 * w * h:
        raise TruncatedDataError("short PPM payload", pos)
    return np.frombuffer(data, np.uint8, 3 * w * h, pos).reshape(h, w, 3).copy()


def read_display(data: bytes) -> np.ndarray:
    """Decode a PNG or binary PPM into an ``(h, w, 3)`` ``uint8`` array."""
    kind = detect_kind(data)
    if kind is ImageFileKind.PPM:
        return _read_ppm(data)
    if kind is ImageFileKind.PNG:
        return np.asarray(Image.open(_io.BytesIO(data)).convert("RGB"))
    raise UnsupportedFormatError(f"{kind.value} is not a display format", 0)


def read_radiance(data: bytes) -> WdrImage:
    kind = detect_kind(data)
    if kind is ImageFileKind.RADIANCE_HDR:
        return read_radiance_hdr(data)
    if kind is ImageFileKind.PFM:
        return read_pfm(data)
    raise UnsupportedFormatError(f"{kind.value} is not a radiance format", 0)


def load(path) -> WdrImage:
    return read_radiance(Path(path).read_bytes())


def save(path, img: np.ndarray) -> None:
    """Write a display image, choosing PNG or PPM from the suffix (PNG otherwise)."""
    path = Path(path)
    kind = ImageFileKind.PPM if path.suffix.lower() in (".ppm", ".pnm") else ImageFileKind.PNG
    path.write_bytes(write_display(img, kind))
