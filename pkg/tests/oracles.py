"""Slow reference implementations, written independently of the package."""


def rev_digits(code: int, width: int) -> int:
    s = str(code).rjust(width, "0")
    return int("".join(reversed(s)))


def encrypt_reference(text: str, keys, width: int) -> list[int]:
    out = []
    for pos in range(len(text)):
        key = keys[pos % len(keys)]
        out.append(rev_digits(ord(text[pos]), width) + key)
    return out


def derive_reference(text: str, width: int) -> tuple[int, int]:
    k1 = 0
    k2 = 0
    for ch in text:
        k1 += rev_digits(ord(ch), width)
        k2 += ord(ch)
    return k1, k2
