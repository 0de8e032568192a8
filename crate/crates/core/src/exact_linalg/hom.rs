use super::{Elem, FinAbGroup, LinalgError, Subgroup};
use std::sync::OnceLock;

/// A homomorphism of finite abelian groups, stored by the images of the
/// source generators.
#[derive(Clone, Debug)]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    images: Vec<Elem>,
    // Hermite basis of the graph {(f(x), x)} inside target + source
    graph: OnceLock<Subgroup>,
}

impl AbHom {
    /// Builds a homomorphism, checking `d * f(g) == 0` for every source
    /// generator `g` of order `d`.
    pub fn new(source: FinAbGroup, target: FinAbGroup, images: Vec<Elem>) -> Result<Self, LinalgError> {
        if images.len() != source.rank() {
            return Err(LinalgError::Shape(format!(
                "{} images for a source of rank {}",
                images.len(),
                source.rank()
            )));
        }
        for (g, img) in images.iter().enumerate() {
            target.check(img)?;
            let d = source.orders()[g];
            if !target.is_zero(&target.scale(d, img)) {
                return Err(LinalgError::InvalidHom {
                    generator: g,
                    order: d,
                    image: img.clone(),
                });
            }
        }
        Ok(Self::from_parts(source, target, images))
    }

    pub(crate) fn from_parts(source: FinAbGroup, target: FinAbGroup, images: Vec<Elem>) -> Self {
        Self {
            source,
            target,
            images,
            graph: OnceLock::new(),
        }
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        let images = vec![target.zero_elem(); source.rank()];
        Self::from_parts(source.clone(), target.clone(), images)
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        Self::from_parts(g.clone(), g.clone(), g.generators())
    }

    /// Multiplication by an integer.
    pub fn scalar(g: &FinAbGroup, k: i64) -> Self {
        let images = g.generators().iter().map(|e| g.scale(k, e)).collect();
        Self::from_parts(g.clone(), g.clone(), images)
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    /// Integer matrix with one column per source generator.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        (0..self.target.rank())
            .map(|r| self.images.iter().map(|img| img[r]).collect())
            .collect()
    }

    pub fn apply(&self, x: &[i64]) -> Elem {
        let mut acc = vec![0i64; self.target.rank()];
        for (&c, img) in x.iter().zip(&self.images) {
            if c != 0 {
                for (a, &v) in acc.iter_mut().zip(img) {
                    *a += c * v;
                }
            }
        }
        self.target.reduce(&acc)
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &AbHom) -> Result<AbHom, LinalgError> {
        if self.target != after.source {
            return Err(LinalgError::Shape("composition of incompatible maps".into()));
        }
        let images = self.images.iter().map(|x| after.apply(x)).collect();
        Ok(Self::from_parts(self.source.clone(), after.target.clone(), images))
    }

    pub fn add(&self, other: &AbHom) -> Result<AbHom, LinalgError> {
        if self.source != other.source || self.target != other.target {
            return Err(LinalgError::Shape("sum of maps with different domains".into()));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| self.target.add(a, b))
            .collect();
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), images))
    }

    pub fn neg(&self) -> AbHom {
        let images = self.images.iter().map(|a| self.target.neg(a)).collect();
        Self::from_parts(self.source.clone(), self.target.clone(), images)
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|x| self.target.is_zero(x))
    }

    fn graph(&self) -> &Subgroup {
        self.graph.get_or_init(|| {
            let (amb, _) = FinAbGroup::direct_sum([&self.target, &self.source]);
            let gens = self
                .images
                .iter()
                .enumerate()
                .map(|(i, img)| {
                    let mut v = img.clone();
                    v.extend(self.source.generator(i));
                    v
                })
                .collect();
            Subgroup::from_reduced(&amb, gens)
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let graph = self.graph();
        let t = self.target.rank();
        let gens = graph.rows()[t..]
            .iter()
            .map(|row| self.source.reduce(&row[t..]))
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        Subgroup::from_reduced(&self.source, gens)
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_reduced(&self.target, self.images.clone())
    }

    /// Some `x` with `f(x) == y`, if one exists.
    pub fn preimage(&self, y: &[i64]) -> Option<Elem> {
        let graph = self.graph();
        let t = self.target.rank();
        let (amb, _) = FinAbGroup::direct_sum([&self.target, &self.source]);
        let d = amb.orders();
        let mut v = self.target.reduce(y);
        v.extend(self.source.zero_elem());
        for i in 0..t {
            let h = graph.pivots()[i];
            if v[i] % h != 0 {
                return None;
            }
            let q = v[i] / h;
            if q != 0 {
                let row = &graph.rows()[i];
                for k in i..v.len() {
                    v[k] = (v[k] - q * row[k]).rem_euclid(d[k]);
                }
            }
        }
        debug_assert!(v[..t].iter().all(|&x| x == 0));
        Some(self.source.neg(&v[t..]))
    }

    /// The unique `g` with `g ∘ self = f`, for `self` surjective. Fails
    /// with a kernel element of `self` not killed by `f`.
    pub fn factor(&self, f: &AbHom) -> Result<AbHom, LinalgError> {
        if f.source != self.source {
            return Err(LinalgError::Shape("factored maps need a common source".into()));
        }
        if !self.is_surjective() {
            return Err(LinalgError::Shape("can only factor through a surjection".into()));
        }
        for k in self.kernel().canonical_basis() {
            let image = f.apply(&k);
            if !f.target.is_zero(&image) {
                return Err(LinalgError::NotWellDefined { witness: k, image });
            }
        }
        let images = self
            .target
            .generators()
            .iter()
            .map(|g| f.apply(&self.preimage(g).expect("surjective")))
            .collect();
        Ok(Self::from_parts(self.target.clone(), f.target.clone(), images))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.order() == self.target.order() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<AbHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let images = self
            .target
            .generators()
            .iter()
            .map(|g| self.preimage(g))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_parts(self.target.clone(), self.source.clone(), images))
    }

    /// The map `source -> T_1 + ... + T_k` with components `maps`.
    pub fn stack(source: &FinAbGroup, maps: &[AbHom]) -> Result<AbHom, LinalgError> {
        if maps.iter().any(|m| &m.source != source) {
            return Err(LinalgError::Shape("stacked maps need a common source".into()));
        }
        let (target, _) = FinAbGroup::direct_sum(maps.iter().map(|m| &m.target));
        let images = (0..source.rank())
            .map(|g| maps.iter().flat_map(|m| m.images[g].iter().copied()).collect())
            .collect();
        Ok(Self::from_parts(source.clone(), target, images))
    }

    /// The map `S_1 + ... + S_k -> target` with components `maps`.
    pub fn join(target: &FinAbGroup, maps: &[AbHom]) -> Result<AbHom, LinalgError> {
        if maps.iter().any(|m| &m.target != target) {
            return Err(LinalgError::Shape("joined maps need a common target".into()));
        }
        let (source, _) = FinAbGroup::direct_sum(maps.iter().map(|m| &m.source));
        let images = maps.iter().flat_map(|m| m.images.iter().cloned()).collect();
        Ok(Self::from_parts(source, target.clone(), images))
    }
}

impl PartialEq for AbHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.images == other.images
    }
}

impl Eq for AbHom {}
