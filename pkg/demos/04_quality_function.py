"""Step through the construction one digit at a time.

At each step two candidates differ in one binary digit; the quality values
of both are shown together with the digit that was kept.
"""

from cbcdbd import ConstructionState, ProductWeights

st = ConstructionState(m=5, d=3, weights=ProductWeights([1.0, 0.5, 0.25]))
while not st.finished:
    r, w = st.r, st.w
    h0, h1 = st.step()
    kept = 1 if h1 < h0 else 0
    print(f"component {r} digit {w - 1}: h(0)={h0:9.4f}  h(1)={h1:9.4f}  keep {kept}")

gv = st.result()
print("generating vector:", [format(g, "05b") for g in gv.indices()])
