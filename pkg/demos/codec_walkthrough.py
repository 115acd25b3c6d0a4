"""The accelerated shift across one block, and the block code it induces.

Run:  python demos/codec_walkthrough.py
"""

from singflow import (BitSequence, Harmonic, RoofFunction, decode_position,
                      decode_sequence, decode_word, encode_block,
                      encode_sequence, fiber_sfts, gap_pair, render_word,
                      return_profile, roof_prime, sft_entropy_wordcount, shift)

# One block 1 0^10 1: the orbit expands (k- doubles), enters the contracting
# region once, then halves k+ down to the next 1.
gap = 11
prof = return_profile(gap)
print(f"block with gap {gap}:")
print(f"  return time p = {prof.p}, contracting visit at r = {prof.r}")
print(f"  origin offsets along the orbit: {prof.offsets}")
print(f"  regions: {prof.regions}")
print(f"  halving parity bits: {prof.epsilon_bits}")
print(f"  code word: {render_word(prof.word)}")
print(f"  decodes back to: {decode_word(prof.word)}\n")

# Every letter of the word pins down where inside the block it sits.
print("position recovery letter by letter:")
for q in range(prof.p):
    k = decode_position(prof.word, q)
    print(f"  letter {q + 1} = {prof.word[q]}:  (k-, k+) = ({k.k_minus}, {k.k_plus})")
print()

# The words of small gaps; gap 4 needs the adjusted region boundary, the
# verbatim one loses its contracting visit (as does every power of two).
for g in (1, 2, 3, 4, 5):
    print(f"  gap {g}: {render_word(encode_block(g))}")
lit = return_profile(4, "paper")
print(f"  gap 4 under the verbatim boundary: regions {lit.regions}, "
      f"word {lit.word}\n")

# The block code acts on whole sequences, one letter per accelerated step.
x = BitSequence.periodic((1, 0, 0, 1, 0))  # gaps 3 and 2 forever
u = encode_sequence(x)
print("periodic point with gap cycle (3, 2):")
print("  coded letters 0..4:", render_word([u.at(i) for i in range(5)]))
print("  decodes back:", decode_sequence(u) == x, "\n")

# The roof of the accelerated suspension: a Birkhoff sum over one step,
# pinned to l*log 2 at the zero sequence.
harm = RoofFunction.from_profile(Harmonic(1.0))
star = BitSequence.zero()
print(f"accelerated roof at the zero sequence: {roof_prime(star, harm):.6f}")
deep = BitSequence.from_ones([-1000, 10 ** 6])
print(f"accelerated roof deep in the expanding region {gap_pair(deep)}: "
      f"{roof_prime(deep, harm):.6f}\n")

# Over the singular fiber of the extension sit two tiny subshifts, each a
# free binary choice every other letter: entropy (log 2)/2.
first, second = fiber_sfts()
print("fiber subshift generators:", [render_word(w) for w in first],
      [render_word(w) for w in second])
print("entropy of each:", sft_entropy_wordcount(first, 40).value)
