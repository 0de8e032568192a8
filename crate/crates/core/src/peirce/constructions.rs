use super::predicates::{annihilator_block, is_idempotent};
use super::{tensor_over_ring, FinRing, PeirceError, PeirceHom, PeirceRing, RingTensor};
use crate::exact_linalg::{descend_bilinear, quotient, AbHom, Bilinear, Elem, FinAbGroup, Quotient, Side, Subgroup};
use num_integer::Integer;

/// `Mat(ℓ, A)` with the diagonal decomposition: every block is `A` and
/// every block multiplication is that of `A`.
pub fn mat_ring(rank: usize, a: &FinRing) -> Result<PeirceRing, PeirceError> {
    if rank == 0 {
        return Err(PeirceError::RankTooSmall { rank, required: 1 });
    }
    let g = a.additive();
    let blocks = vec![vec![g.clone(); rank]; rank];
    let mult = vec![vec![vec![a.mult().clone(); rank]; rank]; rank];
    PeirceRing::new(g.exponent().max(2), blocks, mult)
}

/// `Mat(k, Z/n)` decomposed by the idempotents `Σ_{a ∈ part} e_aa`, one
/// per part. Parts are 0-based and must partition `0..k`.
pub fn grouped_mat_ring(k: usize, n: i64, parts: &[Vec<usize>]) -> Result<PeirceRing, PeirceError> {
    if k == 0 {
        return Err(PeirceError::RankTooSmall { rank: 0, required: 1 });
    }
    if n < 2 {
        return Err(PeirceError::InvalidModulus(n));
    }
    let r = FinRing::matrix(k, n);
    let mut idems = Vec::with_capacity(parts.len());
    for part in parts {
        let mut e = vec![0; k * k];
        for &a in part {
            if a >= k {
                return Err(PeirceError::BadPartition(k));
            }
            e[a * k + a] = 1;
        }
        idems.push(e);
    }
    peirce_from_idempotents(&r, &idems)
}

/// The decomposition `R_ij = e_i R e_j` of a unital ring by a complete
/// family of orthogonal idempotents.
pub fn peirce_from_idempotents(r: &FinRing, idems: &[Elem]) -> Result<PeirceRing, PeirceError> {
    let unit = r
        .unit()
        .ok_or_else(|| PeirceError::NotIdempotentFamily("the ring has no identity".into()))?;
    let g = r.additive();
    for e in idems {
        g.check(e)?;
    }
    for (i, e) in idems.iter().enumerate() {
        for (j, f) in idems.iter().enumerate() {
            let p = r.mul(e, f);
            let expected = if i == j { e.clone() } else { r.zero() };
            if p != expected {
                return Err(PeirceError::NotIdempotentFamily(format!(
                    "e{i} e{j} = {p:?}, expected {expected:?}"
                )));
            }
        }
    }
    let sum = idems.iter().fold(r.zero(), |acc, e| r.add(&acc, e));
    if &sum != unit {
        return Err(PeirceError::NotIdempotentFamily(format!(
            "the idempotents sum to {sum:?}, not to the identity"
        )));
    }
    let l = idems.len();
    if l == 0 {
        return Err(PeirceError::RankTooSmall { rank: 0, required: 1 });
    }
    let gens = g.generators();
    let pres: Vec<Vec<_>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let images = gens.iter().map(|x| r.mul(&r.mul(&idems[i], x), &idems[j])).collect();
                    Subgroup::new(g, images).map(|s| s.presentation())
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let blocks = pres.iter().map(|row| row.iter().map(|p| p.group.clone()).collect()).collect();
    PeirceRing::from_fn(g.exponent().max(2), blocks, |i, j, k, a, b| {
        let x = &pres[i][j].inclusion.images()[a];
        let y = &pres[j][k].inclusion.images()[b];
        pres[i][k].coords(&r.mul(x, y)).expect("e_i R e_j e_j R e_k lies in e_i R e_k")
    })
}

/// Coarsens the decomposition along a partition of the indices: the new
/// block `(P, Q)` is the sum of `R_pq` for `p ∈ P`, `q ∈ Q`, in
/// lexicographic order.
pub fn regroup(r: &PeirceRing, parts: &[Vec<usize>]) -> Result<PeirceRing, PeirceError> {
    let l = r.rank();
    let mut seen = vec![false; l];
    for p in parts {
        if p.is_empty() {
            return Err(PeirceError::BadPartition(l));
        }
        for &i in p {
            if i >= l || seen[i] {
                return Err(PeirceError::BadPartition(l));
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(PeirceError::BadPartition(l));
    }
    let parts: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.sort_unstable();
            p
        })
        .collect();
    let m = parts.len();
    // generator list and block offsets of each coarse block
    let mut gens = vec![vec![Vec::new(); m]; m];
    let mut offs = vec![vec![Vec::new(); m]; m];
    let mut blocks = vec![vec![FinAbGroup::zero(); m]; m];
    for (bi, pi) in parts.iter().enumerate() {
        for (bj, pj) in parts.iter().enumerate() {
            let pieces: Vec<&FinAbGroup> = pi
                .iter()
                .flat_map(|&p| pj.iter().map(move |&q| (p, q)))
                .map(|(p, q)| r.block(p, q))
                .collect();
            let (sum, starts) = FinAbGroup::direct_sum(pieces);
            let mut idx = 0;
            for &p in pi {
                for &q in pj {
                    offs[bi][bj].push(((p, q), starts[idx]));
                    idx += 1;
                    for a in 0..r.block(p, q).rank() {
                        gens[bi][bj].push((p, q, a));
                    }
                }
            }
            blocks[bi][bj] = sum;
        }
    }
    PeirceRing::from_fn(r.modulus(), blocks.clone(), |bi, bj, bk, a, b| {
        let (p, q, a) = gens[bi][bj][a];
        let (q2, t, b) = gens[bj][bk][b];
        let mut v = vec![0; blocks[bi][bk].rank()];
        if q == q2 {
            let prod = r.mult(p, q, t).entry(a, b);
            let o = offs[bi][bk].iter().find(|(pq, _)| *pq == (p, t)).expect("block present").1;
            v[o..o + prod.len()].copy_from_slice(prod);
        }
        v
    })
}

/// Merges the last two indices.
pub fn collapse_rank(r: &PeirceRing) -> Result<PeirceRing, PeirceError> {
    let l = r.rank();
    if l < 2 {
        return Err(PeirceError::RankTooSmall { rank: l, required: 2 });
    }
    let mut parts: Vec<Vec<usize>> = (0..l - 2).map(|i| vec![i]).collect();
    parts.push(vec![l - 2, l - 1]);
    regroup(r, &parts)
}

fn check_firm(right: &Bilinear, ring: &FinRing, left: &Bilinear, action: &Bilinear, what: &str) -> Result<RingTensor, PeirceError> {
    let t = tensor_over_ring(right, ring, left)?;
    let mu = t
        .linearize(action)
        .map_err(|e| PeirceError::ModuleNotFirm(format!("{what}: action not balanced ({e})")))?;
    if !mu.is_isomorphism() {
        return Err(PeirceError::ModuleNotFirm(format!(
            "{what}: multiplication map has kernel of order {} and image of order {}",
            mu.kernel().order(),
            mu.image().order()
        )));
    }
    Ok(t)
}

/// The ring `(S P; Q R)` with `S = P ⊗_R Q`, built from a firm ring `R`,
/// firm modules `P_R` and `_R Q`, and a surjective `R`-bilinear pairing
/// `Q × P -> R`. Index 0 is `S`, index 1 is `R`.
pub fn morita_ring(
    r: &FinRing,
    p_action: &Bilinear,
    q_action: &Bilinear,
    pairing: &Bilinear,
) -> Result<PeirceRing, PeirceError> {
    let rg = r.additive();
    let (p, q) = (p_action.left(), q_action.right());
    if p_action.right() != rg || p_action.target() != p {
        return Err(PeirceError::Shape("P must be a right module P × R -> P".into()));
    }
    if q_action.left() != rg || q_action.target() != q {
        return Err(PeirceError::Shape("Q must be a left module R × Q -> Q".into()));
    }
    if pairing.left() != q || pairing.right() != p || pairing.target() != rg {
        return Err(PeirceError::Shape("the pairing must map Q × P -> R".into()));
    }
    check_firm(r.mult(), r, r.mult(), r.mult(), "R")?;
    check_firm(p_action, r, r.mult(), p_action, "P")?;
    check_firm(r.mult(), r, q_action, q_action, "Q")?;
    let (pg, qg, rgen) = (p.generators(), q.generators(), rg.generators());
    for (a, x) in qg.iter().enumerate() {
        for (b, y) in pg.iter().enumerate() {
            let xy = pairing.entry(a, b);
            for (c, s) in rgen.iter().enumerate() {
                if pairing.apply(&q_action.apply(s, x), y) != r.mul(s, xy)
                    || pairing.apply(x, &p_action.apply(y, s)) != r.mul(xy, s)
                {
                    return Err(PeirceError::PairingNotBalanced(format!(
                        "q{a}, p{b}, r{c}"
                    )));
                }
            }
        }
    }
    let span = Subgroup::new(rg, pairing.table().iter().flatten().cloned().collect())?;
    if !span.is_whole() {
        return Err(PeirceError::PairingNotSurjective);
    }
    let s = tensor_over_ring(p_action, r, q_action)?;
    let sq = s.quotient();
    let pairs = s.tensor().generator_pairs();
    let sg = s.group().clone();

    let m000 = descend_bilinear(Side::Quotient(sq), Side::Quotient(sq), &sg, |u, v| {
        let (a, b) = pairs[u];
        let (c, d) = pairs[v];
        let pr = p_action.apply(&pg[a], pairing.entry(b, c));
        s.pure(&pr, &qg[d])
    })?;
    let m001 = descend_bilinear(Side::Quotient(sq), Side::Plain(p), p, |u, c| {
        let (a, b) = pairs[u];
        p_action.apply(&pg[a], pairing.entry(b, c))
    })?;
    let m010 = Bilinear::from_fn(p, q, &sg, |a, b| s.pure(&pg[a], &qg[b]))?;
    let m100 = descend_bilinear(Side::Plain(q), Side::Quotient(sq), q, |a, v| {
        let (c, d) = pairs[v];
        q_action.apply(pairing.entry(a, c), &qg[d])
    })?;
    let blocks = vec![vec![sg.clone(), p.clone()], vec![q.clone(), rg.clone()]];
    let mult = vec![
        vec![vec![m000, m001], vec![m010, p_action.clone()]],
        vec![vec![m100, pairing.clone()], vec![q_action.clone(), r.mult().clone()]],
    ];
    let n = [rg, p, q].iter().map(|g| g.exponent()).fold(1, |a, b| a.lcm(&b)).max(2);
    PeirceRing::new(n, blocks, mult)
}

/// `R̃ = R ⊗_R R` with blocks `R̃_ij = R_{i*} ⊗_R R_{*j}`, and the
/// multiplication map `R̃ -> R`.
#[derive(Clone, Debug)]
pub struct UniversalRing {
    pub ring: PeirceRing,
    pub canonical: PeirceHom,
}

/// A row or column strip of blocks, as coordinates of the flat ring.
struct Strip {
    coords: Vec<usize>,
    group: FinAbGroup,
}

impl Strip {
    fn new(r: &PeirceRing, blocks: impl Iterator<Item = (usize, usize)>) -> Self {
        let mut coords = Vec::new();
        for (i, j) in blocks {
            let o = r.offset(i, j);
            coords.extend(o..o + r.block(i, j).rank());
        }
        let orders: Vec<i64> = coords.iter().map(|&c| r.additive().orders()[c]).collect();
        let group = FinAbGroup::new(&orders).expect("block orders exceed one");
        Self { coords, group }
    }

    fn restrict(&self, x: &[i64]) -> Elem {
        self.coords.iter().map(|&c| x[c]).collect()
    }

    fn lift(&self, r: &PeirceRing, v: &[i64]) -> Elem {
        let mut x = r.flat().zero();
        for (&c, &a) in self.coords.iter().zip(v) {
            x[c] = a;
        }
        x
    }
}

pub fn universal_ring(r: &PeirceRing) -> Result<UniversalRing, PeirceError> {
    is_idempotent(r).map_err(PeirceError::NotIdempotent)?;
    let l = r.rank();
    let flat = r.flat();
    let fm = flat.mult();
    let rows: Vec<Strip> = (0..l).map(|i| Strip::new(r, (0..l).map(move |k| (i, k)))).collect();
    let cols: Vec<Strip> = (0..l).map(|j| Strip::new(r, (0..l).map(move |k| (k, j)))).collect();
    let right: Vec<Bilinear> = rows
        .iter()
        .map(|s| Bilinear::from_fn(&s.group, flat.additive(), &s.group, |a, g| s.restrict(fm.entry(s.coords[a], g))))
        .collect::<Result<_, _>>()?;
    let left: Vec<Bilinear> = cols
        .iter()
        .map(|s| Bilinear::from_fn(flat.additive(), &s.group, &s.group, |g, b| s.restrict(fm.entry(g, s.coords[b]))))
        .collect::<Result<_, _>>()?;
    let tensors: Vec<Vec<RingTensor>> = (0..l)
        .map(|i| (0..l).map(|j| tensor_over_ring(&right[i], flat, &left[j])).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    let mut mult = Vec::with_capacity(l);
    for i in 0..l {
        let mut mi = Vec::with_capacity(l);
        for j in 0..l {
            let mut mij = Vec::with_capacity(l);
            let pij = tensors[i][j].tensor().generator_pairs();
            for k in 0..l {
                let pjk = tensors[j][k].tensor().generator_pairs();
                let tik = &tensors[i][k];
                let m = descend_bilinear(
                    Side::Quotient(tensors[i][j].quotient()),
                    Side::Quotient(tensors[j][k].quotient()),
                    tik.group(),
                    |u, v| {
                        let (a, b) = pij[u];
                        let (c, d) = pjk[v];
                        let bc = fm.entry(cols[j].coords[b], rows[j].coords[c]);
                        let abc = flat.mul(&rows[i].lift(r, &rows[i].group.generator(a)), bc);
                        tik.pure(&rows[i].restrict(&abc), &cols[k].group.generator(d))
                    },
                )?;
                mij.push(m);
            }
            mi.push(mij);
        }
        mult.push(mi);
    }
    let blocks = tensors
        .iter()
        .map(|row| row.iter().map(|t| t.group().clone()).collect())
        .collect();
    let ring = PeirceRing::new(r.modulus(), blocks, mult)?;
    let maps = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let b = Bilinear::from_fn(&rows[i].group, &cols[j].group, r.block(i, j), |a, c| {
                        let x = fm.entry(rows[i].coords[a], cols[j].coords[c]);
                        r.component(x, i, j)
                    })?;
                    Ok(tensors[i][j].linearize(&b)?)
                })
                .collect::<Result<Vec<_>, PeirceError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let canonical = PeirceHom::new(ring.clone(), r.clone(), maps)?;
    Ok(UniversalRing { ring, canonical })
}

/// `R / I` for the annihilator ideal `I = {x | xR = Rx = 0}`.
#[derive(Clone, Debug)]
pub struct ReducedQuotient {
    pub ring: PeirceRing,
    pub projection: PeirceHom,
    pub ideal: Vec<Vec<Subgroup>>,
}

pub fn reduced_quotient(r: &PeirceRing) -> Result<ReducedQuotient, PeirceError> {
    is_idempotent(r).map_err(PeirceError::NotIdempotent)?;
    let l = r.rank();
    let ideal: Vec<Vec<Subgroup>> = (0..l)
        .map(|i| (0..l).map(|j| annihilator_block(r, i, j)).collect())
        .collect();
    let quots: Vec<Vec<Quotient>> = ideal
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| quotient(r.block(i, j), s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut mult = Vec::with_capacity(l);
    for i in 0..l {
        let mut mi = Vec::with_capacity(l);
        for j in 0..l {
            let mut mij = Vec::with_capacity(l);
            for k in 0..l {
                let m = r.mult(i, j, k);
                let proj = quots[i][k].projection();
                mij.push(descend_bilinear(
                    Side::Quotient(&quots[i][j]),
                    Side::Quotient(&quots[j][k]),
                    quots[i][k].group(),
                    |a, b| proj.apply(m.entry(a, b)),
                )?);
            }
            mi.push(mij);
        }
        mult.push(mi);
    }
    let blocks = quots
        .iter()
        .map(|row| row.iter().map(|q| q.group().clone()).collect())
        .collect();
    let ring = PeirceRing::new(r.modulus(), blocks, mult)?;
    let maps: Vec<Vec<AbHom>> = quots
        .iter()
        .map(|row| row.iter().map(|q| q.projection().clone()).collect())
        .collect();
    let projection = PeirceHom::new(r.clone(), ring.clone(), maps)?;
    Ok(ReducedQuotient {
        ring,
        projection,
        ideal,
    })
}
