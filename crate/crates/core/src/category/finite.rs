use std::sync::Arc;

use crate::error::{Error, Result};
use crate::semigroup::{ElementSet, SyntacticPresentation};
use crate::stability::length_residue_images;

/// Where arrow values compose.
#[derive(Clone, Debug)]
enum Values {
    /// Values are elements of a parent presentation.
    Parent(Arc<SyntacticPresentation>),
    /// Explicit table over opaque values; `u32::MAX` marks undefined products.
    Table { size: usize, compose: Vec<u32> },
}

/// An arrow `src -> dst` carrying `value`.
pub type Arrow = (usize, u32, usize);

/// A finite category whose arrows are triples `(src, value, dst)`;
/// composition only looks at values.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: usize,
    hom: Vec<Vec<u32>>,
    identities: Vec<u32>,
    values: Values,
}

impl FiniteCategory {
    fn from_parent(
        parent: Arc<SyntacticPresentation>,
        objects: usize,
        hom: Vec<Vec<u32>>,
        identities: Vec<u32>,
    ) -> Self {
        FiniteCategory {
            objects,
            hom,
            identities,
            values: Values::Parent(parent),
        }
    }

    /// A synthetic category from explicit hom-sets and a composition table
    /// over `value_count` values. Closure, associativity on consecutive
    /// arrows and neutrality of identities are checked.
    pub fn from_table(
        hom: Vec<Vec<Vec<u32>>>,
        identities: Vec<u32>,
        value_count: usize,
        compose: Vec<u32>,
    ) -> Result<Self> {
        let objects = hom.len();
        if objects == 0 || hom.iter().any(|row| row.len() != objects) {
            return Err(Error::invalid("hom-sets must form a square matrix"));
        }
        if identities.len() != objects || compose.len() != value_count * value_count {
            return Err(Error::invalid(
                "one identity per object and a square table are required",
            ));
        }
        let mut flat = Vec::with_capacity(objects * objects);
        for row in hom {
            for mut set in row {
                set.sort_unstable();
                set.dedup();
                if set.iter().any(|&v| v as usize >= value_count) {
                    return Err(Error::invalid("arrow value out of range"));
                }
                flat.push(set);
            }
        }
        let c = FiniteCategory {
            objects,
            hom: flat,
            identities,
            values: Values::Table {
                size: value_count,
                compose,
            },
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let n = self.objects;
        for x in 0..n {
            let id = self.identities[x];
            if !self.hom(x, x).contains(&id) {
                return Err(Error::invalid(format!(
                    "identity of object {x} is not a loop"
                )));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for &f in self.hom(x, y) {
                    if self.compose(self.identities[x], f) != f
                        || self.compose(f, self.identities[y]) != f
                    {
                        return Err(Error::invalid("identity is not neutral"));
                    }
                    for z in 0..n {
                        for &g in self.hom(y, z) {
                            let fg = self.compose(f, g);
                            if fg == u32::MAX || self.hom(x, z).binary_search(&fg).is_err() {
                                return Err(Error::invalid("composition leaves the hom-set"));
                            }
                            for w in 0..n {
                                for &h in self.hom(z, w) {
                                    if self.compose(fg, h) != self.compose(f, self.compose(g, h)) {
                                        return Err(Error::NotAssociative(f, g, h));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// A monoid seen as a one-object category.
    pub fn one_object(m: Arc<SyntacticPresentation>) -> Result<Self> {
        let e = m
            .identity()
            .ok_or_else(|| Error::invalid("a one-object category needs a monoid"))?;
        let all = m.all().to_vec();
        Ok(FiniteCategory::from_parent(m, 1, vec![all], vec![e]))
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    /// Values of the arrows `x -> y`, ascending.
    pub fn hom(&self, x: usize, y: usize) -> &[u32] {
        &self.hom[x * self.objects + y]
    }

    pub fn identity_at(&self, x: usize) -> u32 {
        self.identities[x]
    }

    pub fn parent(&self) -> Option<&Arc<SyntacticPresentation>> {
        match &self.values {
            Values::Parent(p) => Some(p),
            Values::Table { .. } => None,
        }
    }

    pub fn value_count(&self) -> usize {
        match &self.values {
            Values::Parent(p) => p.size(),
            Values::Table { size, .. } => *size,
        }
    }

    /// Composite value of consecutive arrows.
    #[inline]
    pub fn compose(&self, f: u32, g: u32) -> u32 {
        match &self.values {
            Values::Parent(p) => p.mul(f, g),
            Values::Table { size, compose } => compose[f as usize * size + g as usize],
        }
    }

    /// Idempotent power of a loop value.
    pub fn omega(&self, loop_value: u32) -> u32 {
        match &self.values {
            Values::Parent(p) => p.omega_power(loop_value),
            Values::Table { size, .. } => {
                let mut p = loop_value;
                for _ in 0..=*size {
                    let pp = self.compose(p, p);
                    if pp == p {
                        return p;
                    }
                    p = self.compose(p, loop_value);
                }
                panic!("value {loop_value} is not a loop of a finite category")
            }
        }
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        (0..self.objects).flat_map(move |x| {
            (0..self.objects).flat_map(move |y| self.hom(x, y).iter().map(move |&v| (x, v, y)))
        })
    }

    pub fn arrow_count(&self) -> usize {
        self.hom.iter().map(Vec::len).sum()
    }

    /// Human-readable value: the parent's generator word or `#v`.
    pub fn value_label(&self, v: u32) -> String {
        match &self.values {
            Values::Parent(p) => p.element_label(v),
            Values::Table { .. } => format!("#{v}"),
        }
    }

    /// The local monoid at `x`: the loops with inherited composition.
    /// Returns the table and the arrow value of each of its elements.
    pub fn local_monoid_at(&self, x: usize) -> Result<(SyntacticPresentation, Vec<u32>)> {
        if x >= self.objects {
            return Err(Error::invalid(format!("object {x} out of range")));
        }
        let loops = self.hom(x, x).to_vec();
        let pos = |v: u32| loops.binary_search(&v).expect("loops are closed") as u32;
        let mut mult = Vec::with_capacity(loops.len() * loops.len());
        for &f in &loops {
            for &g in &loops {
                mult.push(pos(self.compose(f, g)));
            }
        }
        let monoid =
            SyntacticPresentation::from_table(loops.len(), mult, Some(pos(self.identities[x])))?;
        Ok((monoid, loops))
    }

    /// Loops at `x` as a subset of the parent presentation.
    pub fn loop_elements(&self, x: usize) -> Option<ElementSet> {
        self.parent()
            .map(|p| ElementSet::from_elements(p.size(), self.hom(x, x).iter().copied()))
    }
}

/// `C_d(L)`: objects `Z_d`, arrows `i -> j` are images of words whose
/// length is `j - i mod d`.
pub fn derived_category(m: &Arc<SyntacticPresentation>, modulus: u32) -> Result<FiniteCategory> {
    let e = m
        .identity()
        .ok_or_else(|| Error::invalid("derived categories need a monoid"))?;
    let residues = length_residue_images(m, modulus)?;
    let d = modulus as usize;
    let mut hom = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            hom.push(residues[(j + d - i) % d].to_vec());
        }
    }
    Ok(FiniteCategory::from_parent(m.clone(), d, hom, vec![e; d]))
}

/// `S_E`: objects are the idempotents of `within` (default: all elements),
/// and `S_E(e, f) = e X f`.
pub fn idempotents_category(
    m: &Arc<SyntacticPresentation>,
    within: Option<&ElementSet>,
) -> Result<FiniteCategory> {
    let base = within.cloned().unwrap_or_else(|| m.all());
    if !m.is_closed(&base) {
        return Err(Error::NotClosed);
    }
    let objects = m.idempotents(Some(&base)).to_vec();
    let n = objects.len();
    if n == 0 {
        return Err(Error::invalid("no idempotent in the considered set"));
    }
    let mut hom = Vec::with_capacity(n * n);
    for &e in &objects {
        for &f in &objects {
            let set =
                ElementSet::from_elements(m.size(), base.iter().map(|x| m.mul(m.mul(e, x), f)));
            hom.push(set.to_vec());
        }
    }
    Ok(FiniteCategory::from_parent(m.clone(), n, hom, objects))
}

/// The consolidated semigroup: all arrows plus an absorbing zero, arrows
/// multiplying by composition when consecutive and to zero otherwise.
///
/// Returns the table and the arrow behind each non-zero element; the zero
/// is the last element.
pub fn consolidate(c: &FiniteCategory) -> Result<(SyntacticPresentation, Vec<Arrow>)> {
    let arrows: Vec<Arrow> = c.arrows().collect();
    let zero = arrows.len() as u32;
    let n = arrows.len() + 1;
    let index = |a: Arrow| -> u32 {
        arrows
            .binary_search_by(|probe| (probe.0, probe.2, probe.1).cmp(&(a.0, a.2, a.1)))
            .expect("composite is an arrow") as u32
    };
    let mut mult = vec![zero; n * n];
    for (i, &(x, f, y)) in arrows.iter().enumerate() {
        for (j, &(y2, g, z)) in arrows.iter().enumerate() {
            if y == y2 {
                mult[i * n + j] = index((x, c.compose(f, g), z));
            }
        }
    }
    let table = SyntacticPresentation::from_table(n, mult, None)?;
    Ok((table, arrows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Alphabet, Regex};
    use crate::Limits;

    fn pres(re: &str, letters: &str) -> Arc<SyntacticPresentation> {
        let a = Alphabet::from_chars(letters).unwrap();
        let dfa = Regex::parse(re).unwrap().to_dfa(Some(&a)).unwrap();
        Arc::new(SyntacticPresentation::syntactic_morphism(&dfa, &Limits::default()).unwrap())
    }

    #[test]
    fn derived_category_of_trivial_monoid() {
        let c = derived_category(&pres("(a|b)*", "ab"), 3).unwrap();
        assert_eq!(c.object_count(), 3);
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(c.hom(x, y), &[0]);
            }
        }
    }

    #[test]
    fn derived_category_of_even_a() {
        let c = derived_category(&pres("(aa)*", "a"), 2).unwrap();
        assert_eq!(c.hom(0, 0), &[0]);
        assert_eq!(c.hom(1, 1), &[0]);
        assert_eq!(c.hom(0, 1), &[1]);
        assert_eq!(c.hom(1, 0), &[1]);
    }

    #[test]
    fn local_monoids_agree_across_objects() {
        let c = derived_category(&pres("(aa)*ab(bb)*", "ab"), 4).unwrap();
        let first = c.hom(0, 0).to_vec();
        for x in 1..4 {
            assert_eq!(c.hom(x, x), first.as_slice());
        }
        let (local, values) = c.local_monoid_at(2).unwrap();
        assert_eq!(local.size(), values.len());
    }

    #[test]
    fn idempotents_category_of_u1() {
        let u1 = Arc::new(SyntacticPresentation::from_table(2, vec![0, 1, 1, 1], Some(0)).unwrap());
        let c = idempotents_category(&u1, None).unwrap();
        assert_eq!(c.object_count(), 2);
        assert_eq!(c.hom(0, 0), &[0, 1]);
        assert_eq!(c.hom(0, 1), &[1]);
        assert_eq!(c.hom(1, 0), &[1]);
        assert_eq!(c.hom(1, 1), &[1]);
    }

    #[test]
    fn idempotents_category_of_ab_semigroup() {
        let m = pres("ab", "ab");
        let c = idempotents_category(&m, Some(m.semigroup_part())).unwrap();
        assert_eq!(c.object_count(), 1);
        assert_eq!(c.hom(0, 0).len(), 1);
        let not_closed = ElementSet::from_elements(m.size(), [1]);
        assert!(matches!(
            idempotents_category(&m, Some(&not_closed)),
            Err(Error::NotClosed)
        ));
    }

    #[test]
    fn consolidate_one_object_adds_zero() {
        let m = pres("(aa)*", "a");
        let c = FiniteCategory::one_object(m.clone()).unwrap();
        let (s, arrows) = consolidate(&c).unwrap();
        assert_eq!(s.size(), m.size() + 1);
        assert_eq!(arrows.len(), m.size());
        let zero = s.size() as u32 - 1;
        for x in 0..s.size() as u32 {
            assert_eq!(s.mul(x, zero), zero);
            assert_eq!(s.mul(zero, x), zero);
        }
    }

    #[test]
    fn consolidate_two_identities() {
        // Two objects with only their identities (values 0 and 1).
        let c = FiniteCategory::from_table(
            vec![vec![vec![0], vec![]], vec![vec![], vec![1]]],
            vec![0, 1],
            2,
            vec![0, u32::MAX, u32::MAX, 1],
        )
        .unwrap();
        let (s, _) = consolidate(&c).unwrap();
        assert_eq!(s.size(), 3);
        assert_eq!(s.mul(0, 1), 2);
        assert_eq!(s.mul(0, 0), 0);
    }

    #[test]
    fn synthetic_tables_are_checked() {
        // A loop whose square leaves the hom-set.
        let bad = FiniteCategory::from_table(
            vec![vec![vec![0, 1]]],
            vec![0],
            3,
            vec![0, 1, 2, 1, 2, 2, 2, 2, 2],
        );
        assert!(bad.is_err());
        let wrong_identity =
            FiniteCategory::from_table(vec![vec![vec![0, 1]]], vec![1], 2, vec![0, 1, 1, 1]);
        assert!(wrong_identity.is_err());
    }
}
