use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::semigroup::elements::ElementSet;
use crate::semigroup::presentation::SyntacticPresentation;

/// Exhaustive division test: does some subsemigroup of `t` map onto `s`?
///
/// This is a test oracle for small tables; both sizes are capped by
/// `limits.max_division`.
pub fn divides_bruteforce(
    s: &SyntacticPresentation,
    t: &SyntacticPresentation,
    limits: &Limits,
) -> Result<bool> {
    for size in [s.size(), t.size()] {
        if size > limits.max_division {
            return Err(Error::Guard {
                what: "division oracle table size",
                actual: size as u128,
                cap: limits.max_division as u128,
                flag: "--max-division",
            });
        }
    }
    let n = t.size();
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as usize) < s.size() {
            continue;
        }
        let sub = ElementSet::from_elements(n, (0..n as u32).filter(|i| mask & (1 << i) != 0));
        if !t.is_closed(&sub) {
            continue;
        }
        if maps_onto(t, &sub, s) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Searches for a surjective morphism from the closed subset `sub` of `t`
/// onto `s`, enumerating images of a generating set.
fn maps_onto(t: &SyntacticPresentation, sub: &ElementSet, s: &SyntacticPresentation) -> bool {
    let mut generators = Vec::new();
    let mut generated = ElementSet::empty(t.size());
    for x in sub.iter() {
        if !generated.contains(x) {
            generators.push(x);
            generated = t.closure(generators.iter().copied());
        }
    }
    let mut images = vec![0u32; generators.len()];
    loop {
        if let Some(map) = extend(t, &generators, &images, s) {
            let mut hit = ElementSet::empty(s.size());
            for x in sub.iter() {
                hit.insert(map[x as usize]);
            }
            if hit.len() == s.size() {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == images.len() {
                return false;
            }
            images[i] += 1;
            if (images[i] as usize) < s.size() {
                break;
            }
            images[i] = 0;
            i += 1;
        }
    }
}

/// Extends generator images to a morphism, or reports an inconsistency.
fn extend(
    t: &SyntacticPresentation,
    generators: &[u32],
    images: &[u32],
    s: &SyntacticPresentation,
) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; t.size()];
    let mut known = Vec::new();
    for (&g, &img) in generators.iter().zip(images) {
        if map[g as usize] != u32::MAX && map[g as usize] != img {
            return None;
        }
        if map[g as usize] == u32::MAX {
            map[g as usize] = img;
            known.push(g);
        }
    }
    let mut i = 0;
    while i < known.len() {
        let x = known[i];
        for (&g, &img) in generators.iter().zip(images) {
            for (a, b, va, vb) in [(x, g, map[x as usize], img), (g, x, img, map[x as usize])] {
                let y = t.mul(a, b);
                let v = s.mul(va, vb);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = v;
                    known.push(y);
                } else if map[y as usize] != v {
                    return None;
                }
            }
        }
        i += 1;
    }
    // Full homomorphism check on the generated part.
    for &x in &known {
        for &y in &known {
            if map[t.mul(x, y) as usize] != s.mul(map[x as usize], map[y as usize]) {
                return None;
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_group(n: u32) -> SyntacticPresentation {
        let mult = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        SyntacticPresentation::from_table(n as usize, mult, Some(0)).unwrap()
    }

    #[test]
    fn every_table_divides_itself() {
        let z3 = cyclic_group(3);
        assert!(divides_bruteforce(&z3, &z3, &Limits::default()).unwrap());
    }

    #[test]
    fn group_does_not_divide_trivial_monoid() {
        assert!(
            !divides_bruteforce(&cyclic_group(2), &cyclic_group(1), &Limits::default()).unwrap()
        );
    }

    #[test]
    fn z2_divides_z4_but_not_z3() {
        assert!(
            divides_bruteforce(&cyclic_group(2), &cyclic_group(4), &Limits::default()).unwrap()
        );
        assert!(
            !divides_bruteforce(&cyclic_group(2), &cyclic_group(3), &Limits::default()).unwrap()
        );
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            divides_bruteforce(&cyclic_group(2), &cyclic_group(9), &Limits::default()),
            Err(Error::Guard { .. })
        ));
    }
}
