"""Pure-Python kernel for batched single-iteration coloring trials.

Bit-for-bit equivalent to running the propose/resolve program through the
round engine once per seed; the compiled backend mirrors this arithmetic
exactly, so either backend may serve the Monte Carlo paths.
"""

NAME = "pure"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_ID_SALT = 0xD1342543DE82EF95


def trial_counts(ids, indptr, indices, list_indptr, list_values, seed_base, trials):
    """Per-node adoption counts over `trials` independent single iterations.

    Trial t draws, for every node, the proposal of the first phase-1
    iteration under run seed (seed_base + t): 0 with probability 1/2,
    otherwise a uniform color from the node's list.  A node adopts iff its
    proposal is nonzero and no neighbor proposed the same color.
    """
    n = len(ids)
    counts = [0] * n
    proposals = [0] * n
    for t in range(trials):
        seed = (seed_base + t) & _MASK
        s0 = (seed ^ _GOLDEN) & _MASK
        s0 = ((s0 ^ (s0 >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        s0 = ((s0 ^ (s0 >> 27)) * 0x94D049BB133111EB) & _MASK
        s0 ^= s0 >> 31
        for i in range(n):
            z = (s0 ^ ((ids[i] * _ID_SALT) & _MASK)) & _MASK
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
            state = z ^ (z >> 31)
            # coin draw
            state = (state + _GOLDEN) & _MASK
            w = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            w = ((w ^ (w >> 27)) * 0x94D049BB133111EB) & _MASK
            w ^= w >> 31
            zero = w >> 63
            # index draw (always taken, mirroring the program's draw order)
            state = (state + _GOLDEN) & _MASK
            w = ((state ^ (state >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            w = ((w ^ (w >> 27)) * 0x94D049BB133111EB) & _MASK
            w ^= w >> 31
            if zero:
                proposals[i] = 0
            else:
                lo = list_indptr[i]
                size = list_indptr[i + 1] - lo
                proposals[i] = list_values[lo + (w % size)]
        for i in range(n):
            p = proposals[i]
            if p == 0:
                continue
            ok = True
            for j in range(indptr[i], indptr[i + 1]):
                if proposals[indices[j]] == p:
                    ok = False
                    break
            if ok:
                counts[i] += 1
    return counts
