"""Exact symbolic computation in partially commutative (right-angled Artin) groups.

Submodules:
    graphs  -- commutation graphs: links, closure, deflation, width, doubling
    words   -- group elements as words: geodesics, blocks, roots, irreducibility
    dmnf    -- clans and the Diekert-Muscholl serialization of traces
    embed   -- padded free-group embeddings and displacement bounds
    geq     -- quadratic constrained generalised equations and base change
    quadnf  -- normalization of quadratic words by explicit automorphisms
    towers  -- floor-by-floor graph towers with presentation emission
"""

__version__ = "0.1.0"
