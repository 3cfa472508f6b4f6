"""Seeded splitmix64, the only generator used for test-case selection."""

MASK64 = (1 << 64) - 1


class SplitMix64:
    """Standard splitmix64 stream; identical output in every language."""

    def __init__(self, seed):
        self.state = seed & MASK64

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound):
        """Value in [0, bound); bound is tiny next to 2^64 so modulo bias is ignored"""
        if bound <= 0:
            raise ValueError('bound must be positive')
        return self.next() % bound


def derive_seed(seed, *labels):
    """Mix instance labels into a base seed so grid cells get independent streams"""
    gen = SplitMix64(seed)
    value = gen.next()
    for label in labels:
        gen = SplitMix64(value ^ (int(label) & MASK64))
        value = gen.next()
    return value
