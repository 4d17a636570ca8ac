#!/usr/bin/env python3
"""Regenerate the binary test fixtures under tests/fixtures.

Synthetic chest-film stand-ins: the pneumonia images carry bright opaque
patches over the lung fields, the normal ones are dark.  Output is
deterministic.
"""
import random
import struct
import sys
from pathlib import Path

from PIL import Image, ImageDraw, ImageFilter


def film(width, height, opacity, seed):
    rng = random.Random(seed)
    img = Image.new("L", (width, height), 20)
    d = ImageDraw.Draw(img)
    # thorax and two lung fields
    d.ellipse([width * 0.08, height * 0.05, width * 0.92, height * 1.1], fill=70)
    for x0 in (0.18, 0.55):
        d.ellipse([width * x0, height * 0.15, width * (x0 + 0.27), height * 0.85], fill=35)
    # ribs
    for i in range(8):
        y = height * (0.2 + i * 0.08)
        d.arc([width * 0.12, y - 20, width * 0.88, y + 30], 200, 340, fill=110, width=3)
    for _ in range(opacity):
        cx = rng.uniform(0.2, 0.8) * width
        cy = rng.uniform(0.25, 0.8) * height
        r = rng.uniform(0.08, 0.16) * width
        d.ellipse([cx - r, cy - r, cx + r, cy + r], fill=rng.randint(225, 250))
    if opacity:
        img = Image.eval(img, lambda v: min(255, v + 90))
    return img.filter(ImageFilter.GaussianBlur(2))


def dicom(img, path):
    """Explicit VR little endian, 16-bit monochrome, native pixel data."""
    w, h = img.size
    pixels = b"".join(struct.pack("<H", v * 16) for v in img.tobytes())

    def el(group, elem, vr, value):
        if len(value) % 2:
            value += b"\0" if vr == b"UI" else b" "
        if vr in (b"OB", b"OW", b"UN", b"SQ", b"UT"):
            return struct.pack("<HH2sHI", group, elem, vr, 0, len(value)) + value
        return struct.pack("<HH2sH", group, elem, vr, len(value)) + value

    ts = el(0x0002, 0x0010, b"UI", b"1.2.840.10008.1.2.1")
    meta = el(0x0002, 0x0000, b"UL", struct.pack("<I", len(ts))) + ts
    body = b"".join([
        el(0x0008, 0x0060, b"CS", b"DX"),
        el(0x0028, 0x0002, b"US", struct.pack("<H", 1)),
        el(0x0028, 0x0004, b"CS", b"MONOCHROME2"),
        el(0x0028, 0x0010, b"US", struct.pack("<H", h)),
        el(0x0028, 0x0011, b"US", struct.pack("<H", w)),
        el(0x0028, 0x0100, b"US", struct.pack("<H", 16)),
        el(0x0028, 0x0101, b"US", struct.pack("<H", 12)),
        el(0x0028, 0x0103, b"US", struct.pack("<H", 0)),
        el(0x7FE0, 0x0010, b"OW", pixels),
    ])
    path.write_bytes(b"\0" * 128 + b"DICM" + meta + body)


def main(out):
    out.mkdir(parents=True, exist_ok=True)
    film(320, 280, 9, 1).save(out / "xray_pneumonia.png", optimize=False)
    film(320, 280, 0, 2).save(out / "xray_normal.png", optimize=False)
    film(300, 300, 0, 3).convert("RGB").save(out / "xray_normal.jpg", quality=90)
    dicom(film(96, 80, 6, 4), out / "xray_pneumonia.dcm")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "fixtures")
