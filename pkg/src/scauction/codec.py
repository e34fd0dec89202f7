"""Fixed-width wire format for bid messages.

Layout, most significant field first, 40 bits total:

    start_sc   10 bits   0..1023
    length-1   10 bits   lengths 1..1024
    ratio      10 bits   round(ratio * 1023)
    min SNR    10 bits   0.1 dB steps from -20.0 dB, saturating at +82.3 dB
"""

from __future__ import annotations

from .bidder import BidMessage

FIELD_BITS = 10
FIELD_MASK = (1 << FIELD_BITS) - 1
MESSAGE_BITS = 4 * FIELD_BITS

RATIO_SCALE = FIELD_MASK            # 1023
SNR_MIN_DB = -20.0
SNR_STEP_DB = 0.1

MAX_START = FIELD_MASK
MAX_LENGTH = FIELD_MASK + 1


def _clamp(code: int) -> int:
    return min(max(code, 0), FIELD_MASK)


def encode_bid(message: BidMessage) -> int:
    """Pack a bid message into a 40-bit integer.

    Raises ValueError when the start index or length cannot be represented.
    Ratio and SNR codes saturate at the field edges.
    """
    if not 0 <= message.start_sc <= MAX_START:
        raise ValueError(f"start_sc {message.start_sc} outside 0..{MAX_START}")
    if not 1 <= message.length <= MAX_LENGTH:
        raise ValueError(f"length {message.length} outside 1..{MAX_LENGTH}")
    ratio_code = _clamp(round(message.ratio * RATIO_SCALE))
    snr_code = _clamp(round((message.min_snr_db - SNR_MIN_DB) / SNR_STEP_DB))
    return (
        (message.start_sc << (3 * FIELD_BITS))
        | ((message.length - 1) << (2 * FIELD_BITS))
        | (ratio_code << FIELD_BITS)
        | snr_code
    )


def decode_bid(word: int) -> BidMessage:
    """Unpack a 40-bit integer into the quantized bid message it encodes."""
    if not 0 <= word < (1 << MESSAGE_BITS):
        raise ValueError(f"word {word} is not a {MESSAGE_BITS}-bit value")
    start = (word >> (3 * FIELD_BITS)) & FIELD_MASK
    length = ((word >> (2 * FIELD_BITS)) & FIELD_MASK) + 1
    ratio_code = (word >> FIELD_BITS) & FIELD_MASK
    snr_code = word & FIELD_MASK
    return BidMessage(
        start_sc=start,
        length=length,
        ratio=ratio_code / RATIO_SCALE,
        min_snr_db=SNR_MIN_DB + SNR_STEP_DB * snr_code,
    )


def wire_roundtrip(message: BidMessage) -> BidMessage:
    """What the auctioneer actually sees: the message after quantization."""
    return decode_bid(encode_bid(message))


def overhead_bits(messages) -> int:
    """Uplink cost of a message collection: 40 bits each."""
    return MESSAGE_BITS * len(messages)
