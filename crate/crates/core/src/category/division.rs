use std::collections::HashMap;
use std::sync::Arc;

use crate::category::finite::{derived_category, Arrow, FiniteCategory};
use crate::error::{Error, Result};
use crate::semigroup::SyntacticPresentation;

/// A relational morphism `tau : C -> D`: an object map and, for every arrow
/// of `C`, a set of arrows of `D` between the image objects (given by
/// their values).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionWitness {
    pub objects: Vec<usize>,
    pub arrows: HashMap<Arrow, Vec<u32>>,
}

impl DivisionWitness {
    /// The identity witness of `c` onto itself.
    pub fn identity(c: &FiniteCategory) -> DivisionWitness {
        DivisionWitness {
            objects: (0..c.object_count()).collect(),
            arrows: c.arrows().map(|a| (a, vec![a.1])).collect(),
        }
    }
}

/// True iff `w` is a division of `c` by `d`: images are non-empty arrows
/// between image objects, consecutive products are contained in the image
/// of the composite, identities are covered, and distinct coterminal arrows
/// have disjoint images.
pub fn division_check(w: &DivisionWitness, c: &FiniteCategory, d: &FiniteCategory) -> bool {
    let n = c.object_count();
    if w.objects.len() != n || w.objects.iter().any(|&x| x >= d.object_count()) {
        return false;
    }
    let tau = |a: &Arrow| w.arrows.get(a);
    // Images lie in the right hom-sets and are non-empty.
    for a @ (x, _, y) in c.arrows() {
        let Some(img) = tau(&a) else { return false };
        let target = d.hom(w.objects[x], w.objects[y]);
        if img.is_empty() || img.iter().any(|v| target.binary_search(v).is_err()) {
            return false;
        }
    }
    // Identities.
    for x in 0..n {
        let img = tau(&(x, c.identity_at(x), x)).expect("checked above");
        if !img.contains(&d.identity_at(w.objects[x])) {
            return false;
        }
    }
    // Products of consecutive arrows.
    for x in 0..n {
        for y in 0..n {
            for &f in c.hom(x, y) {
                let fi = tau(&(x, f, y)).expect("checked above");
                for z in 0..n {
                    for &g in c.hom(y, z) {
                        let gi = tau(&(y, g, z)).expect("checked above");
                        let composite =
                            tau(&(x, c.compose(f, g), z)).expect("composite is an arrow");
                        for &f2 in fi {
                            for &g2 in gi {
                                if !composite.contains(&d.compose(f2, g2)) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // Separation of coterminal arrows.
    for x in 0..n {
        for y in 0..n {
            let hom = c.hom(x, y);
            let mut owner: HashMap<u32, u32> = HashMap::new();
            for &f in hom {
                for &v in tau(&(x, f, y)).expect("checked above") {
                    if let Some(&other) = owner.get(&v) {
                        if other != f {
                            return false;
                        }
                    }
                    owner.insert(v, f);
                }
            }
        }
    }
    true
}

/// The division of `C_{d2}` by `C_d` for `d | d2`: `x -> x mod d` on
/// objects and `(x, m, y) -> {(x mod d, m, y mod d)}` on arrows.
///
/// Returns the witness together with both categories.
pub fn prop15_division(
    m: &Arc<SyntacticPresentation>,
    d: u32,
    d2: u32,
) -> Result<(DivisionWitness, FiniteCategory, FiniteCategory)> {
    if d == 0 || d2 == 0 || !d2.is_multiple_of(d) {
        return Err(Error::NotDivisible(d, d2));
    }
    let big = derived_category(m, d2)?;
    let small = derived_category(m, d)?;
    let objects = (0..d2 as usize).map(|x| x % d as usize).collect();
    let arrows = big.arrows().map(|a| (a, vec![a.1])).collect();
    Ok((DivisionWitness { objects, arrows }, big, small))
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
    fn identity_witness() {
        let c = derived_category(&pres("(aa)*ab(bb)*", "ab"), 4).unwrap();
        assert!(division_check(&DivisionWitness::identity(&c), &c, &c));
    }

    #[test]
    fn overlapping_images_fail() {
        let c = derived_category(&pres("(aa)*", "a"), 1).unwrap();
        let mut w = DivisionWitness::identity(&c);
        // Both arrows 0 -> 0 sent to the identity.
        w.arrows.insert((0, 1, 0), vec![0]);
        assert!(!division_check(&w, &c, &c));
    }

    #[test]
    fn even_a_onto_one_object() {
        let m = pres("(aa)*", "a");
        let (w, big, small) = prop15_division(&m, 1, 2).unwrap();
        assert_eq!(w.objects, vec![0, 0]);
        assert!(division_check(&w, &big, &small));
    }

    #[test]
    fn same_modulus() {
        let m = pres("(a|b)*b", "ab");
        let (w, big, small) = prop15_division(&m, 3, 3).unwrap();
        assert_eq!(w, DivisionWitness::identity(&big));
        assert!(division_check(&w, &big, &small));
    }

    #[test]
    fn divisibility_required() {
        assert!(matches!(
            prop15_division(&pres("a", "a"), 2, 3),
            Err(Error::NotDivisible(2, 3))
        ));
    }
}
