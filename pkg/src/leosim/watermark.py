"""LSB / block-DCT / Haar-DWT watermark codecs on 8-bit grayscale images.

Images are plain 2-D uint8 numpy arrays.  Payloads are 1-D arrays of 0/1
(uint8).  Each codec provides embed/extract plus a capacity rule:

  LSB  -- one bit per pixel in a chosen bit plane (plane 0..3)
  DCT  -- one bit per full 8x8 block, encoded in the sign of the
          difference between two mid-band coefficients
  DWT  -- one bit per HH detail coefficient of a single-level Haar
          transform, encoded by quantisation-index modulation

The mean MSE these codecs produce on a corpus is what the offloading
simulator consumes as the per-algorithm quality constant.
"""
import math
from dataclasses import dataclass

import numpy as np

LSB, DCT, DWT = "lsb", "dct", "dwt"
ALGORITHM_KINDS = (LSB, DCT, DWT)

# mid-band coefficient pair used by the DCT codec
_DCT_COEF_A = (2, 3)
_DCT_COEF_B = (3, 2)


class CapacityError(ValueError):
    """Payload does not fit in the carrier image."""


@dataclass(frozen=True)
class WatermarkAlgorithm:
    kind: str
    strength: float = 8.0   # DCT margin / DWT quantisation step
    bit_plane: int = 0      # LSB only

    def __post_init__(self):
        if self.kind not in ALGORITHM_KINDS:
            raise ValueError(f"unknown watermark kind {self.kind!r}")
        if self.kind in (DCT, DWT) and self.strength <= 0:
            raise ValueError("strength must be > 0 for DCT/DWT")
        if self.kind == LSB and self.bit_plane not in range(4):
            raise ValueError("LSB bit plane must be in 0..3")


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float


def _check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("image must be a 2-D uint8 array")
    return img


def capacity_bits(shape: tuple[int, int], alg: WatermarkAlgorithm) -> int:
    h, w = shape
    if alg.kind == LSB:
        return h * w
    if alg.kind == DCT:
        return (h // 8) * (w // 8)
    return (h // 2) * (w // 2)  # DWT: HH band size


# --- 2-D transforms ---------------------------------------------------------

def _dct_matrix() -> np.ndarray:
    # orthonormal 8x8 DCT-II basis
    k = np.arange(8)
    c = np.cos(np.pi * (2 * k[None, :] + 1) * k[:, None] / 16.0)
    c *= math.sqrt(2.0 / 8.0)
    c[0, :] = math.sqrt(1.0 / 8.0)
    return c

_DCT_M = _dct_matrix()


def _haar_forward(x: np.ndarray):
    a = x[0::2, 0::2]
    b = x[0::2, 1::2]
    c = x[1::2, 0::2]
    d = x[1::2, 1::2]
    ll = (a + b + c + d) / 2.0
    lh = (a - b + c - d) / 2.0
    hl = (a + b - c - d) / 2.0
    hh = (a - b - c + d) / 2.0
    return ll, lh, hl, hh


def _haar_inverse(ll, lh, hl, hh) -> np.ndarray:
    h2, w2 = ll.shape
    out = np.empty((2 * h2, 2 * w2))
    out[0::2, 0::2] = (ll + lh + hl + hh) / 2.0
    out[0::2, 1::2] = (ll - lh + hl - hh) / 2.0
    out[1::2, 0::2] = (ll + lh - hl - hh) / 2.0
    out[1::2, 1::2] = (ll - lh - hl + hh) / 2.0
    return out


def _to_uint8(x: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(x), 0, 255).astype(np.uint8)


# --- embed / extract --------------------------------------------------------

def embed(img: np.ndarray, payload: np.ndarray,
          alg: WatermarkAlgorithm) -> np.ndarray:
    """Embed a bit payload, returning a new stego image of equal shape."""
    img = _check_image(img)
    payload = np.asarray(payload, dtype=np.uint8).ravel()
    if np.any(payload > 1):
        raise ValueError("payload must contain only bits")
    if payload.size > capacity_bits(img.shape, alg):
        raise CapacityError(
            f"payload of {payload.size} bits exceeds capacity "
            f"{capacity_bits(img.shape, alg)} for {alg.kind}")
    if payload.size == 0:
        return img.copy()

    if alg.kind == LSB:
        flat = img.ravel().copy()
        mask = np.uint8(~(1 << alg.bit_plane) & 0xFF)
        n = payload.size
        flat[:n] = (flat[:n] & mask) | (payload << alg.bit_plane)
        return flat.reshape(img.shape)

    if alg.kind == DCT:
        out = img.astype(np.float64)
        n_bw = img.shape[1] // 8
        for idx, bit in enumerate(payload):
            r, c = (idx // n_bw) * 8, (idx % n_bw) * 8
            block = _DCT_M @ out[r:r + 8, c:c + 8] @ _DCT_M.T
            mid = (block[_DCT_COEF_A] + block[_DCT_COEF_B]) / 2.0
            # pixel rounding/clipping can flip a marginal pair, so widen
            # the gap until the bit survives quantisation
            half = alg.strength / 2.0
            for _ in range(8):
                sign = 1.0 if bit else -1.0
                block[_DCT_COEF_A] = mid + sign * half
                block[_DCT_COEF_B] = mid - sign * half
                pixels = _to_uint8(_DCT_M.T @ block @ _DCT_M).astype(np.float64)
                check = _DCT_M @ pixels @ _DCT_M.T
                if (check[_DCT_COEF_A] > check[_DCT_COEF_B]) == bool(bit):
                    break
                half *= 2.0
            out[r:r + 8, c:c + 8] = pixels
        return _to_uint8(out)

    # DWT: quantise HH coefficients to even/odd multiples of the step
    x = img.astype(np.float64)
    h2, w2 = img.shape[0] // 2, img.shape[1] // 2
    ll, lh, hl, hh = _haar_forward(x[:2 * h2, :2 * w2])
    flat_hh = hh.ravel()
    step = alg.strength
    bits = payload.astype(np.float64)
    coefs = flat_hh[:payload.size]
    flat_hh[:payload.size] = step * (
        2.0 * np.round((coefs / step - bits) / 2.0) + bits)
    hh = flat_hh.reshape(hh.shape)
    rec = x.copy()
    rec[:2 * h2, :2 * w2] = _haar_inverse(ll, lh, hl, hh)
    return _to_uint8(rec)


def extract(img: np.ndarray, alg: WatermarkAlgorithm,
            payload_len: int) -> np.ndarray:
    """Recover ``payload_len`` bits from a stego image."""
    img = _check_image(img)
    if payload_len > capacity_bits(img.shape, alg):
        raise CapacityError("requested length exceeds capacity")
    if payload_len == 0:
        return np.zeros(0, dtype=np.uint8)

    if alg.kind == LSB:
        flat = img.ravel()
        return ((flat[:payload_len] >> alg.bit_plane) & 1).astype(np.uint8)

    if alg.kind == DCT:
        x = img.astype(np.float64)
        n_bw = img.shape[1] // 8
        bits = np.empty(payload_len, dtype=np.uint8)
        for idx in range(payload_len):
            r, c = (idx // n_bw) * 8, (idx % n_bw) * 8
            block = _DCT_M @ x[r:r + 8, c:c + 8] @ _DCT_M.T
            bits[idx] = 1 if block[_DCT_COEF_A] > block[_DCT_COEF_B] else 0
        return bits

    x = img.astype(np.float64)
    h2, w2 = img.shape[0] // 2, img.shape[1] // 2
    _, _, _, hh = _haar_forward(x[:2 * h2, :2 * w2])
    coefs = hh.ravel()[:payload_len]
    return (np.round(coefs / alg.strength).astype(np.int64) & 1).astype(np.uint8)


# --- quality ----------------------------------------------------------------

def psnr(original: np.ndarray, stego: np.ndarray,
         peak: float = 255.0) -> QualityReport:
    """MSE and PSNR between carrier and stego image.

    Identical images report mse=0 and psnr=inf (the lossless value).
    """
    original = _check_image(original)
    stego = _check_image(stego)
    if original.shape != stego.shape:
        raise ValueError("image dimensions differ")
    diff = original.astype(np.float64) - stego.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return QualityReport(mse=0.0, psnr_db=math.inf)
    return QualityReport(mse=mse, psnr_db=10.0 * math.log10(peak * peak / mse))


def calibrate_mse(corpus: list[np.ndarray], alg: WatermarkAlgorithm,
                  payload_density: float = 0.5, seed: int = 0) -> float:
    """Mean embed MSE over a corpus at a fixed payload density.

    Deterministic for a fixed seed; this is the number a scenario config
    carries as Mse[j] for every satellite running algorithm ``alg``.
    """
    if not corpus:
        raise ValueError("corpus must not be empty")
    rng = np.random.default_rng(seed)
    total = 0.0
    for img in corpus:
        n_bits = int(capacity_bits(np.asarray(img).shape, alg)
                     * payload_density)
        payload = rng.integers(0, 2, size=n_bits, dtype=np.uint8)
        stego = embed(img, payload, alg)
        total += psnr(img, stego).mse
    return total / len(corpus)


# --- portable graymap I/O ---------------------------------------------------

def load_pgm(path) -> np.ndarray:
    """Read a binary (P5) 8-bit PGM file."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    i = 0
    while len(tokens) < 4:
        while i < len(data) and data[i:i + 1].isspace():
            i += 1
        if data[i:i + 1] == b"#":
            while i < len(data) and data[i] != 0x0A:
                i += 1
            continue
        start = i
        while i < len(data) and not data[i:i + 1].isspace():
            i += 1
        tokens.append(data[start:i])
    if tokens[0] != b"P5":
        raise ValueError("not a binary PGM (P5) file")
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval != 255:
        raise ValueError("only 8-bit PGM supported")
    pixels = np.frombuffer(data[i + 1:i + 1 + width * height], dtype=np.uint8)
    if pixels.size != width * height:
        raise ValueError("truncated PGM pixel data")
    return pixels.reshape(height, width).copy()


def save_pgm(path, img: np.ndarray) -> None:
    img = _check_image(img)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        fh.write(img.tobytes())
