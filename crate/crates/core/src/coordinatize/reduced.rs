use super::{require_rank, CoordError, CoordinatizationResult, Mode, Tables};
use crate::commrel::{check_k_linear, check_reduced_rel, CommRelData};
use crate::exact_linalg::{subgroup_equal, AbHom, Bilinear, Elem, FinAbGroup, Subgroup, SubgroupPresentation};
use num_integer::Integer;

/// `R_ss` as the additive span of the elements `⟨x, y, z⟩_ij` inside
/// `E = ∏_{k≠s} End(U_ks)^op × End(U_sk)`.
///
/// An element of `E` is stored as the images of the generators of each
/// `U_sk` (left action) followed by those of each `U_ks` (right action).
#[derive(Clone, Debug)]
pub struct EndoPresentation {
    pub s: usize,
    /// The `(i, j)` whose brackets define the span.
    pub fixed: (usize, usize),
    ambient: FinAbGroup,
    modules: Vec<(FinAbGroup, FinAbGroup)>,
    left: Vec<usize>,
    right: Vec<usize>,
    pub span: Subgroup,
    presentation: SubgroupPresentation,
}

impl EndoPresentation {
    fn layout(d: &CommRelData, s: usize) -> Self {
        let l = d.rank();
        let modules: Vec<(FinAbGroup, FinAbGroup)> =
            (0..l).map(|k| (d.module(s, k).clone(), d.module(k, s).clone())).collect();
        let mut parts = Vec::new();
        let (mut left, mut right) = (vec![0; l], vec![0; l]);
        let mut at = 0;
        for k in (0..l).filter(|&k| k != s) {
            let (sk, ks) = &modules[k];
            left[k] = at;
            for _ in 0..sk.rank() {
                parts.push(sk);
                at += sk.rank();
            }
            right[k] = at;
            for _ in 0..ks.rank() {
                parts.push(ks);
                at += ks.rank();
            }
        }
        let (ambient, _) = FinAbGroup::direct_sum(parts);
        let span = Subgroup::trivial(&ambient);
        let presentation = span.presentation();
        Self {
            s,
            fixed: (0, 0),
            ambient,
            modules,
            left,
            right,
            span,
            presentation,
        }
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    /// `R_ss` as an abstract group.
    pub fn group(&self) -> &FinAbGroup {
        &self.presentation.group
    }

    /// The element of `E` represented by `g ∈ R_ss`.
    pub fn include(&self, g: &[i64]) -> Elem {
        self.presentation.inclusion.apply(g)
    }

    /// Coordinates in `R_ss` of an element of `E`, if it lies in the span.
    pub fn coords(&self, e: &[i64]) -> Option<Elem> {
        self.presentation.coords(e)
    }

    /// Image of generator `c` of `U_sk` under the left component.
    pub fn left_image(&self, e: &[i64], k: usize, c: usize) -> Elem {
        let r = self.modules[k].0.rank();
        let o = self.left[k] + c * r;
        e[o..o + r].to_vec()
    }

    /// Image of generator `c` of `U_ks` under the right component.
    pub fn right_image(&self, e: &[i64], k: usize, c: usize) -> Elem {
        let r = self.modules[k].1.rank();
        let o = self.right[k] + c * r;
        e[o..o + r].to_vec()
    }

    fn apply_left(&self, e: &[i64], k: usize, v: &[i64]) -> Elem {
        let g = &self.modules[k].0;
        let mut out = g.zero_elem();
        for (c, &n) in v.iter().enumerate() {
            g.add_scaled(&mut out, n, &self.left_image(e, k, c));
        }
        out
    }

    fn apply_right(&self, e: &[i64], k: usize, v: &[i64]) -> Elem {
        let g = &self.modules[k].1;
        let mut out = g.zero_elem();
        for (c, &n) in v.iter().enumerate() {
            g.add_scaled(&mut out, n, &self.right_image(e, k, c));
        }
        out
    }

    fn assemble(&self, mut left: impl FnMut(usize, &Elem) -> Elem, mut right: impl FnMut(usize, &Elem) -> Elem) -> Elem {
        let mut e = self.ambient.zero_elem();
        for k in (0..self.modules.len()).filter(|&k| k != self.s) {
            let (sk, ks) = &self.modules[k];
            for (c, w) in sk.generators().iter().enumerate() {
                let o = self.left[k] + c * sk.rank();
                e[o..o + sk.rank()].copy_from_slice(&left(k, w));
            }
            for (c, w) in ks.generators().iter().enumerate() {
                let o = self.right[k] + c * ks.rank();
                e[o..o + ks.rank()].copy_from_slice(&right(k, w));
            }
        }
        e
    }

    /// Product in `E`: composition on the left components, reversed
    /// composition on the right components.
    pub fn mul(&self, a: &[i64], b: &[i64]) -> Elem {
        self.assemble(
            |k, w| self.apply_left(a, k, &self.apply_left(b, k, w)),
            |k, w| self.apply_right(b, k, &self.apply_right(a, k, w)),
        )
    }

    /// Projection of `E` onto the factor `End(U_ks)^op × End(U_sk)`.
    fn factor_projection(&self, k: usize) -> AbHom {
        let (sk, ks) = &self.modules[k];
        let lw = sk.rank() * sk.rank();
        let rw = ks.rank() * ks.rank();
        let mut coords: Vec<usize> = (self.left[k]..self.left[k] + lw).collect();
        coords.extend(self.right[k]..self.right[k] + rw);
        let (target, _) = FinAbGroup::direct_sum(
            std::iter::repeat(sk).take(sk.rank()).chain(std::iter::repeat(ks).take(ks.rank())),
        );
        let images = self
            .ambient
            .generators()
            .iter()
            .map(|g| coords.iter().map(|&c| g[c]).collect())
            .collect();
        AbHom::new(self.ambient.clone(), target, images).expect("coordinate projection")
    }
}

/// `⟨x, y, z⟩_ij` for `x ∈ U_si`, `y ∈ U_ij`, `z ∈ U_js`. Where both
/// defining formulas apply they are compared.
fn bracket(d: &CommRelData, p: &EndoPresentation, (i, j): (usize, usize), x: &[i64], y: &[i64], z: &[i64]) -> Result<Elem, CoordError> {
    let s = p.s;
    let xy = d.cmap(s, i, j).apply(x, y);
    let yz = d.cmap(i, j, s).apply(y, z);
    let clash = std::cell::Cell::new(None);
    let e = p.assemble(
        |k, w| {
            // x((yz)w) for k ≠ i, (xy)(zw) for k ≠ j
            let second = (k != j).then(|| d.cmap(s, j, k).apply(&xy, &d.cmap(j, s, k).apply(z, w)));
            if k == i {
                return second.expect("i != j");
            }
            let first = d.cmap(s, i, k).apply(x, &d.cmap(i, s, k).apply(&yz, w));
            if second.is_some_and(|v| v != first) {
                clash.set(Some(k));
            }
            first
        },
        |k, w| {
            // (wx)(yz) for k ≠ i, (w(xy))z for k ≠ j
            let second = (k != j).then(|| d.cmap(k, j, s).apply(&d.cmap(k, s, j).apply(w, &xy), z));
            if k == i {
                return second.expect("i != j");
            }
            let first = d.cmap(k, i, s).apply(&d.cmap(k, s, i).apply(w, x), &yz);
            if second.is_some_and(|v| v != first) {
                clash.set(Some(k));
            }
            first
        },
    );
    match clash.get() {
        Some(k) => Err(CoordError::NotWellDefined(format!(
            "the two formulas for <x,y,z>_{i}{j} disagree on index {k} (s = {s})"
        ))),
        None => Ok(e),
    }
}

fn brackets(d: &CommRelData, p: &EndoPresentation, pair @ (i, j): (usize, usize)) -> Result<Vec<Elem>, CoordError> {
    let s = p.s;
    let mut out = Vec::new();
    for x in d.module(s, i).generators() {
        for y in d.module(i, j).generators() {
            for z in d.module(j, s).generators() {
                out.push(bracket(d, p, pair, &x, &y, &z)?);
            }
        }
    }
    Ok(out)
}

/// Checks behind the reduced construction for one diagonal index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RGenCertificate {
    pub s: usize,
    pub fixed: (usize, usize),
    /// The span for the fixed pair equals the span over all pairs.
    pub span_equal: bool,
    /// Per `i ≠ s`: projection to `End(U_is)^op × End(U_si)` is injective on
    /// the span.
    pub injective: Vec<(usize, bool)>,
    /// Products of span elements lie in the span.
    pub closed: bool,
}

impl RGenCertificate {
    pub fn passed(&self) -> bool {
        self.span_equal && self.closed && self.injective.iter().all(|&(_, ok)| ok)
    }
}

fn pairs(l: usize, s: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in (0..l).filter(|&i| i != s) {
        for j in (0..l).filter(|&j| j != s && j != i) {
            out.push((i, j));
        }
    }
    out
}

fn endo_presentation(d: &CommRelData, s: usize) -> Result<(EndoPresentation, RGenCertificate), CoordError> {
    let mut p = EndoPresentation::layout(d, s);
    let all = pairs(d.rank(), s);
    p.fixed = all[0];
    p.span = Subgroup::new(&p.ambient, brackets(d, &p, p.fixed)?)?;
    let mut every = Vec::new();
    for &pair in &all {
        every.extend(brackets(d, &p, pair)?);
    }
    let span_equal = subgroup_equal(&p.span, &Subgroup::new(&p.ambient, every)?);
    p.presentation = p.span.presentation();
    let injective = (0..d.rank())
        .filter(|&i| i != s)
        .map(|i| {
            let f = p.presentation.inclusion.then(&p.factor_projection(i)).expect("composable");
            (i, f.is_injective())
        })
        .collect();
    let basis = p.span.canonical_basis();
    let closed = basis
        .iter()
        .all(|a| basis.iter().all(|b| p.span.contains(&p.mul(a, b))));
    let cert = RGenCertificate {
        s,
        fixed: p.fixed,
        span_equal,
        injective,
        closed,
    };
    Ok((p, cert))
}

/// `x u` for `x ∈ U_si`, `u ∈ U_is`: writes `u = Σ n_t y_t z_t` with
/// `y_t ∈ U_ij`, `z_t ∈ U_js` and returns `Σ n_t ⟨x, y_t, z_t⟩_ij`.
fn diagonal_product(d: &CommRelData, p: &EndoPresentation, i: usize, j: usize, x: &[i64], u: &[i64]) -> Result<Elem, CoordError> {
    let s = p.s;
    let (uij, ujs) = (d.module(i, j), d.module(j, s));
    let mut terms = Vec::new();
    for y in uij.generators() {
        for z in ujs.generators() {
            let o = uij.elem_order(&y).gcd(&ujs.elem_order(&z));
            if o > 1 {
                terms.push((y.clone(), z, o));
            }
        }
    }
    let orders: Vec<i64> = terms.iter().map(|t| t.2).collect();
    let free = FinAbGroup::new(&orders)?;
    let images = terms.iter().map(|(y, z, _)| d.cmap(i, j, s).apply(y, z)).collect();
    let phi = AbHom::new(free, d.module(i, s).clone(), images)?;
    let n = phi.preimage(u).ok_or_else(|| {
        CoordError::PreconditionFailed(format!("U_{i}{j} U_{j}{s} does not generate U_{i}{s}"))
    })?;
    let mut out = p.ambient.zero_elem();
    for ((y, z, _), &c) in terms.iter().zip(&n) {
        if c != 0 {
            p.ambient.add_scaled(&mut out, c, &bracket(d, p, (i, j), x, y, z)?);
        }
    }
    Ok(out)
}

/// Reconstruction from reduced relations: `R_ss` is the span of the
/// `⟨x, y, z⟩_ij` in `∏ End(U_is)^op × End(U_si)`, acting on the
/// off-diagonal blocks through its components.
pub fn reduced_coordinatize(d: &CommRelData) -> Result<CoordinatizationResult, CoordError> {
    require_rank(d, 4)?;
    check_k_linear(d).map_err(|a| CoordError::PreconditionFailed(format!("module of root {a:?} is not a Z/{}-module", d.modulus())))?;
    check_reduced_rel(d).map_err(CoordError::Relations)?;
    let l = d.rank();
    let mut pres = Vec::with_capacity(l);
    let mut certs = Vec::with_capacity(l);
    for s in 0..l {
        let (p, c) = endo_presentation(d, s)?;
        if let Some(&(i, _)) = c.injective.iter().find(|(_, ok)| !ok) {
            return Err(CoordError::InjectivityFailure(format!("R_{s}{s} -> End(U_{i}{s})^op x End(U_{s}{i})")));
        }
        if !c.closed {
            return Err(CoordError::NotWellDefined(format!("span for s = {s} is not closed under products")));
        }
        pres.push(p);
        certs.push(c);
    }
    let mut t = Tables::new(d, pres.iter().map(|p| p.group().clone()).collect());
    for p in &pres {
        let s = p.s;
        let rss = p.group().clone();
        let incl: Vec<Elem> = rss.generators().iter().map(|g| p.include(g)).collect();
        for i in (0..l).filter(|&i| i != s) {
            let (usi, uis) = (d.module(s, i), d.module(i, s));
            let left = incl.iter().map(|e| (0..usi.rank()).map(|c| p.left_image(e, i, c)).collect()).collect();
            t.set((s, s, i), Bilinear::new(rss.clone(), usi.clone(), usi.clone(), left)?);
            let right = (0..uis.rank()).map(|c| incl.iter().map(|e| p.right_image(e, i, c)).collect()).collect();
            t.set((i, s, s), Bilinear::new(uis.clone(), rss.clone(), uis.clone(), right)?);
            let mut aux = (0..l).filter(|&j| j != s && j != i);
            let (j, j2) = (aux.next().expect("rank >= 4"), aux.next().expect("rank >= 4"));
            let mut table = Vec::with_capacity(usi.rank());
            for x in usi.generators() {
                let mut row = Vec::with_capacity(uis.rank());
                for u in uis.generators() {
                    let e = diagonal_product(d, p, i, j, &x, &u)?;
                    if e != diagonal_product(d, p, i, j2, &x, &u)? {
                        return Err(CoordError::NotWellDefined(format!(
                            "R_{s}{i} x R_{i}{s} depends on the auxiliary index"
                        )));
                    }
                    row.push(p.coords(&e).ok_or_else(|| {
                        CoordError::NotWellDefined(format!("product R_{s}{i} R_{i}{s} outside the span"))
                    })?);
                }
                table.push(row);
            }
            t.set((s, i, s), Bilinear::new(usi.clone(), uis.clone(), rss.clone(), table)?);
        }
        let table = incl
            .iter()
            .map(|a| incl.iter().map(|b| p.coords(&p.mul(a, b)).expect("span is closed")).collect())
            .collect();
        t.set((s, s, s), Bilinear::new(rss.clone(), rss.clone(), rss, table)?);
    }
    let (ring, lemma_ass, predicates) = t.finish(d.modulus(), Mode::Reduced)?;
    Ok(CoordinatizationResult {
        ring,
        mode: Mode::Reduced,
        r_cons: Vec::new(),
        r_gen: certs,
        lemma_ass,
        predicates,
    })
}
