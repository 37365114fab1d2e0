#!/usr/bin/env python3
"""Pure-Python reference for the generator described in rng.md.

Prints the test vectors listed there. Shares no code with the C++ library.
"""

M64 = (1 << 64) - 1


class MT19937_64:
    NN, MM = 312, 156
    MATRIX_A = 0xB5026F5AA96619E9
    UM, LM = 0xFFFFFFFF80000000, 0x7FFFFFFF

    def __init__(self, seed):
        self.mt = [0] * self.NN
        self.mt[0] = seed & M64
        for i in range(1, self.NN):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & M64
        self.mti = self.NN

    def next_u64(self):
        if self.mti >= self.NN:
            mt = self.mt
            for i in range(self.NN):
                x = (mt[i] & self.UM) | (mt[(i + 1) % self.NN] & self.LM)
                xa = x >> 1
                if x & 1:
                    xa ^= self.MATRIX_A
                mt[i] = mt[(i + self.MM) % self.NN] ^ xa
            self.mti = 0
        x = self.mt[self.mti]
        self.mti += 1
        x ^= (x >> 29) & 0x5555555555555555
        x ^= (x << 17) & 0x71D67FFFEDA60000
        x ^= (x << 37) & 0xFFF7EEE000000000
        x ^= x >> 43
        return x & M64

    def uniform01(self):
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo, hi):
        return lo + (hi - lo) * self.uniform01()

    def coin(self):
        return (self.next_u64() >> 63) != 0

    def below(self, n):
        threshold = ((1 << 64) - n) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


def derive_seed(seed, index):
    return splitmix64((seed + 0x9E3779B97F4A7C15 * (index + 1)) & M64)


def gen_spoofed(envelopes, n, seed):
    """envelopes: {sensor: (lat_min, lat_max, lon_min, lon_max)}."""
    order = [envelopes[k] + (k,) for k in sorted(envelopes)]
    r = MT19937_64(seed)
    out = []
    for _ in range(n):
        lat_min, lat_max, lon_min, lon_max, sensor = order[r.below(len(order))]
        lat_add = r.coin()
        lat_d = r.uniform(0.1, 10.0)
        lon_add = r.coin()
        lon_d = r.uniform(0.1, 10.0)
        lat = lat_max + lat_d if lat_add else lat_min - lat_d
        lon = lon_max + lon_d if lon_add else lon_min - lon_d
        out.append((sensor, min(max(lat, -90.0), 90.0), min(max(lon, -180.0), 180.0)))
    return out


def main():
    r = MT19937_64(5489)
    for _ in range(9999):
        r.next_u64()
    print("mt19937_64(5489) 10000th output:", r.next_u64())
    r = MT19937_64(42)
    print("seed 42 next_u64 x3:", [r.next_u64() for _ in range(3)])
    r = MT19937_64(42)
    print("seed 42 uniform01 x3:", [repr(r.uniform01()) for _ in range(3)])
    r = MT19937_64(42)
    print("seed 42 uniform(0.1, 10) x3:", [repr(r.uniform(0.1, 10.0)) for _ in range(3)])
    r = MT19937_64(42)
    print("seed 42 coin x8:", [int(r.coin()) for _ in range(8)])
    r = MT19937_64(42)
    print("seed 42 below(10) x8:", [r.below(10) for _ in range(8)])
    print("splitmix64(0):", splitmix64(0))
    print("derive_seed(42, 0..2):", [derive_seed(42, i) for i in range(3)])
    envelopes = {"a": (48.0, 52.0, 9.0, 11.0), "b": (40.0, 41.0, 0.0, 1.0)}
    for sensor, lat, lon in gen_spoofed(envelopes, 3, 42):
        print(f"gen_spoofed seed 42: {sensor} {lat!r} {lon!r}")


if __name__ == "__main__":
    main()
