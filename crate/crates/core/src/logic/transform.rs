use crate::automata::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::logic::formula::{Formula, Position};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Lifts every `MOD` and `D` predicate to the lcm `L` of the occurring
/// moduli: `MOD_i^m` becomes the disjunction of `MOD_j^L` over
/// `j = i mod m`. Returns the lifted formula and `L` (1 if none occur).
pub fn normalize_moduli(f: &Formula) -> Result<(Formula, u32)> {
    let lcm = f
        .moduli()
        .into_iter()
        .try_fold(1u32, |acc, m| (acc / gcd(acc, m)).checked_mul(m))
        .ok_or_else(|| Error::invalid("lcm of the moduli overflows"))?;
    let lifted = f.map_atoms(&mut |atom| {
        Ok(match atom {
            Formula::Mod {
                residue,
                modulus,
                var,
            } if *modulus != lcm => Formula::Or(
                (0..lcm)
                    .filter(|j| j % modulus == *residue)
                    .map(|j| Formula::Mod {
                        residue: j,
                        modulus: lcm,
                        var: var.clone(),
                    })
                    .collect(),
            ),
            Formula::Length { residue, modulus } if *modulus != lcm => Formula::Or(
                (0..lcm)
                    .filter(|j| j % modulus == *residue)
                    .map(|j| Formula::Length {
                        residue: j,
                        modulus: lcm,
                    })
                    .collect(),
            ),
            other => other.clone(),
        })
    })?;
    Ok((lifted, lcm))
}

fn check_moduli(f: &Formula, d: u32, length_allowed: bool) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let mut found = Vec::new();
    let mut residual = false;
    f.visit(&mut |g| match g {
        Formula::Mod { modulus, .. } if *modulus != d => found.push(*modulus),
        Formula::Length { modulus, .. } => {
            residual = true;
            if *modulus != d {
                found.push(*modulus);
            }
        }
        _ => {}
    });
    if residual && !length_allowed {
        return Err(Error::ResidualLength);
    }
    if !found.is_empty() {
        found.sort_unstable();
        found.dedup();
        return Err(Error::ModulusMismatch { expected: d, found });
    }
    Ok(())
}

/// `psi_0 .. psi_{d-1}`: `psi_i` replaces `D_i^d` by true and every other
/// `D_j^d` by false. No simplification is applied.
pub fn decompose_d(f: &Formula, d: u32) -> Result<Vec<Formula>> {
    check_moduli(f, d, true)?;
    (0..d)
        .map(|i| {
            f.map_atoms(&mut |atom| {
                Ok(match atom {
                    Formula::Length { residue, .. } if *residue == i => Formula::True,
                    Formula::Length { .. } => Formula::False,
                    other => other.clone(),
                })
            })
        })
        .collect()
}

/// Rewrites a formula over `alphabet` with `MOD^d` predicates into one over
/// the enriched alphabet `A x Z_d` without modular predicates:
/// `MOD_i(x)` becomes the disjunction of `(a, i)(x)` and `a(p)` the
/// disjunction of `(a, i)(p)`. Conjunctions and disjunctions of letter
/// tests at one position are then merged.
pub fn mod_to_letters(f: &Formula, d: u32, alphabet: &Alphabet) -> Result<Formula> {
    check_moduli(f, d, false)?;
    if alphabet.is_enriched() {
        return Err(Error::invalid("mod_to_letters expects a plain alphabet"));
    }
    let rewritten = f.map_atoms(&mut |atom| match atom {
        Formula::Letter { letter, pos } => {
            if letter.is_enriched() {
                return Err(Error::invalid(format!(
                    "letter {letter} is already enriched"
                )));
            }
            Ok(Formula::Or(
                (0..d)
                    .map(|i| Formula::Letter {
                        letter: Symbol::enriched(letter.letter(), i),
                        pos: pos.clone(),
                    })
                    .collect(),
            ))
        }
        Formula::Mod { residue, var, .. } => Ok(Formula::Or(
            alphabet
                .symbols()
                .iter()
                .map(|a| Formula::Letter {
                    letter: Symbol::enriched(a.letter(), *residue),
                    pos: Position::var(var),
                })
                .collect(),
        )),
        other => Ok(other.clone()),
    })?;
    Ok(simplify_letter_sets(&rewritten))
}

/// The set of letters a node tests at a single position, if it is a letter
/// atom or a disjunction of letter atoms at one position.
fn letter_set(f: &Formula) -> Option<(Position, Vec<Symbol>)> {
    match f {
        Formula::Letter { letter, pos } => Some((pos.clone(), vec![*letter])),
        Formula::Or(gs) if !gs.is_empty() => {
            let mut pos = None;
            let mut set = Vec::new();
            for g in gs {
                let Formula::Letter { letter, pos: p } = g else {
                    return None;
                };
                match &pos {
                    None => pos = Some(p.clone()),
                    Some(q) if q != p => return None,
                    _ => {}
                }
                set.push(*letter);
            }
            set.sort_unstable();
            set.dedup();
            Some((pos.unwrap(), set))
        }
        _ => None,
    }
}

fn from_letter_set(pos: Position, set: Vec<Symbol>) -> Formula {
    match set.len() {
        0 => Formula::False,
        1 => Formula::Letter {
            letter: set[0],
            pos,
        },
        _ => Formula::Or(
            set.into_iter()
                .map(|letter| Formula::Letter {
                    letter,
                    pos: pos.clone(),
                })
                .collect(),
        ),
    }
}

fn simplify_letter_sets(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => Formula::not(simplify_letter_sets(g)),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(simplify_letter_sets(g))),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(simplify_letter_sets(g))),
        Formula::And(gs) | Formula::Or(gs) => {
            let conj = matches!(f, Formula::And(_));
            let children: Vec<Formula> = gs.iter().map(simplify_letter_sets).collect();
            // Merge letter tests that share a position, keeping the slot of
            // the first one.
            let mut out: Vec<Option<Formula>> = Vec::new();
            let mut groups: Vec<(Position, Vec<Symbol>, usize)> = Vec::new();
            for child in children {
                match letter_set(&child) {
                    Some((pos, set)) => match groups.iter_mut().find(|(p, _, _)| *p == pos) {
                        Some((_, acc, _)) => {
                            if conj {
                                acc.retain(|s| set.contains(s));
                            } else {
                                acc.extend(set);
                                acc.sort_unstable();
                                acc.dedup();
                            }
                        }
                        None => {
                            groups.push((pos, set, out.len()));
                            out.push(None);
                        }
                    },
                    None => out.push(Some(child)),
                }
            }
            for (pos, set, slot) in groups {
                out[slot] = Some(from_letter_set(pos, set));
            }
            let mut items: Vec<Formula> = out.into_iter().flatten().collect();
            if items.len() == 1 {
                return items.pop().unwrap();
            }
            if conj {
                Formula::And(items)
            } else {
                Formula::Or(items)
            }
        }
        atom => atom.clone(),
    }
}

/// Back from the enriched alphabet: `(a, i)(x + k)` becomes
/// `a(x + k) and MOD_{i - k}^d(x)`, `(a, i)(min + k)` becomes `a(min + k)`
/// or false, and `(a, i)(max - k)` becomes `a(max - k) and D_{i + k + 1}^d`.
pub fn letters_to_mod(f: &Formula, d: u32) -> Result<Formula> {
    if d == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    f.map_atoms(&mut |atom| {
        let Formula::Letter { letter, pos } = atom else {
            return Ok(atom.clone());
        };
        let Some(i) = letter.residue() else {
            return Err(Error::NotEnriched(letter.to_string()));
        };
        if i >= d {
            return Err(Error::invalid(format!(
                "letter {letter} has residue >= {d}"
            )));
        }
        let plain = Formula::Letter {
            letter: letter.underlying(),
            pos: pos.clone(),
        };
        Ok(match pos {
            Position::Var { var, offset } => Formula::And(vec![
                plain,
                Formula::Mod {
                    residue: (i + d - offset % d) % d,
                    modulus: d,
                    var: var.clone(),
                },
            ]),
            Position::Min(k) if k % d == i => plain,
            Position::Min(_) => Formula::False,
            Position::Max(k) => Formula::And(vec![
                plain,
                Formula::Length {
                    residue: ((i as u64 + *k as u64 + 1) % d as u64) as u32,
                    modulus: d,
                },
            ]),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{encode_alpha, parse_word};
    use crate::logic::formula::evaluate;

    fn f(text: &str) -> Formula {
        Formula::parse(text).unwrap()
    }

    #[test]
    fn decompose_single_predicate() {
        let parts = decompose_d(&f("(D 1 2)"), 2).unwrap();
        assert_eq!(parts, vec![Formula::False, Formula::True]);
    }

    #[test]
    fn decompose_without_simplifying() {
        let parts =
            decompose_d(&f("(or (and (D 0 2) (exists x (letter a x))) (D 1 2))"), 2).unwrap();
        assert_eq!(
            parts[0].to_string(),
            "(or (and true (exists x (letter a x))) false)"
        );
        assert_eq!(
            parts[1].to_string(),
            "(or (and false (exists x (letter a x))) true)"
        );
        let plain = f("(exists x (letter a x))");
        assert_eq!(
            decompose_d(&plain, 3).unwrap(),
            vec![plain.clone(), plain.clone(), plain]
        );
    }

    #[test]
    fn decompose_rejects_mixed_moduli() {
        assert!(matches!(
            decompose_d(&f("(and (D 0 2) (D 1 3))"), 2),
            Err(Error::ModulusMismatch { expected: 2, .. })
        ));
    }

    #[test]
    fn mod_to_letters_examples() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let g = mod_to_letters(&f("(exists x (and (letter a x) (mod 0 2 x)))"), 2, &ab).unwrap();
        assert_eq!(g.to_string(), "(exists x (letter a@0 x))");
        let h = mod_to_letters(&f("(exists x (letter a x))"), 2, &ab).unwrap();
        assert_eq!(
            h.to_string(),
            "(exists x (or (letter a@0 x) (letter a@1 x)))"
        );
        assert_eq!(
            mod_to_letters(&Formula::True, 2, &ab).unwrap(),
            Formula::True
        );
        assert!(matches!(
            mod_to_letters(&f("(D 0 2)"), 2, &ab),
            Err(Error::ResidualLength)
        ));
        assert!(matches!(
            mod_to_letters(&f("(exists x (mod 0 3 x))"), 2, &ab),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn letters_to_mod_examples() {
        let g = letters_to_mod(&f("(exists x (letter a@1 x))"), 2).unwrap();
        assert_eq!(g.to_string(), "(exists x (and (letter a x) (mod 1 2 x)))");
        assert_eq!(letters_to_mod(&Formula::True, 2).unwrap(), Formula::True);
        assert!(matches!(
            letters_to_mod(&f("(exists x (letter a x))"), 2),
            Err(Error::NotEnriched(_))
        ));
        assert_eq!(
            letters_to_mod(&f("(letter-min a@1 2)"), 2).unwrap(),
            Formula::False
        );
        assert_eq!(
            letters_to_mod(&f("(letter-at b@0 x +3)"), 2)
                .unwrap()
                .to_string(),
            "(and (letter-at b x +3) (mod 1 2 x))"
        );
        assert_eq!(
            letters_to_mod(&f("(letter-max b@0 0)"), 2)
                .unwrap()
                .to_string(),
            "(and (letter-max b 0) (D 1 2))"
        );
    }

    #[test]
    fn lifting_to_lcm() {
        let (g, l) = normalize_moduli(&f("(exists x (and (mod 1 2 x) (D 0 3)))")).unwrap();
        assert_eq!(l, 6);
        assert_eq!(
            g.to_string(),
            "(exists x (and (or (mod 1 6 x) (mod 3 6 x) (mod 5 6 x)) (or (D 0 6) (D 3 6))))"
        );
        assert_eq!(normalize_moduli(&Formula::True).unwrap().1, 1);
    }

    #[test]
    fn enriched_translation_agrees_on_well_formed_words() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let phi = f("(exists x (and (letter a x) (mod 0 2 x) (letter-at b x +1)))");
        let psi = mod_to_letters(&phi, 2, &ab).unwrap();
        for w in ab.words_upto(6) {
            let lifted = encode_alpha(&w, 0, 2).unwrap();
            assert_eq!(
                evaluate(&phi, &w).unwrap(),
                evaluate(&psi, lifted.symbols()).unwrap(),
                "{w:?}"
            );
        }
        assert!(evaluate(
            &psi,
            encode_alpha(&parse_word("ab").unwrap(), 0, 2)
                .unwrap()
                .symbols()
        )
        .unwrap());
    }
}
