//! Shared fixtures: a seeded corpus of small random languages, a random
//! formula generator, and oracles that only use automaton runs.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use fragdec_core::automata::Regex;
use fragdec_core::logic::{Formula, Position};
use fragdec_core::{Alphabet, Dfa, ElementSet, Limits, Symbol, SyntacticPresentation};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn regex(re: &str, letters: &str) -> Dfa {
    let a = Alphabet::from_chars(letters).unwrap();
    Regex::parse(re).unwrap().to_dfa(Some(&a)).unwrap()
}

pub fn pres(dfa: &Dfa) -> Arc<SyntacticPresentation> {
    Arc::new(SyntacticPresentation::syntactic_morphism(dfa, &Limits::default()).unwrap())
}

/// A minimal automaton with at most `max_states` states over one or two
/// letters, with random transitions and accepting states.
pub fn random_dfa(rng: &mut StdRng, max_states: usize) -> Dfa {
    let letters = if rng.gen_bool(0.8) { "ab" } else { "a" };
    let alphabet = Alphabet::from_chars(letters).unwrap();
    let n = rng.gen_range(1..=max_states);
    let delta = (0..n * alphabet.len())
        .map(|_| rng.gen_range(0..n))
        .collect();
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Dfa::new(alphabet, n, 0, finals, delta).unwrap().minimize()
}

pub struct Sample {
    pub dfa: Dfa,
    pub pres: Arc<SyntacticPresentation>,
}

/// `count` random languages whose syntactic monoid has at most `cap`
/// elements, drawn from a fixed seed.
pub fn corpus(seed: u64, count: usize, cap: usize) -> Vec<Sample> {
    let mut rng = StdRng::seed_from_u64(seed);
    let limits = Limits {
        max_monoid: cap,
        ..Limits::default()
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let dfa = random_dfa(&mut rng, 6);
        if let Ok(p) = SyntacticPresentation::syntactic_morphism(&dfa, &limits) {
            out.push(Sample {
                dfa,
                pres: Arc::new(p),
            });
        }
    }
    out
}

/// Transformation of the states of `dfa` induced by a word of letter
/// indices.
pub fn transformation(dfa: &Dfa, word: &[usize]) -> Vec<usize> {
    (0..dfa.state_count()).map(|q| dfa.run(q, word)).collect()
}

/// Maps transformations back to elements of the presentation using each
/// element's generator word.
pub fn element_index(dfa: &Dfa, pres: &SyntacticPresentation) -> HashMap<Vec<usize>, u32> {
    let alphabet = dfa.alphabet();
    (0..pres.size() as u32)
        .map(|x| {
            let word = alphabet.indices(pres.element_word(x).unwrap()).unwrap();
            (transformation(dfa, &word), x)
        })
        .collect()
}

/// `eta((A^d)^*)` by composing state transformations of words of length
/// `d`, without the presentation's multiplication table.
pub fn power_star_oracle(dfa: &Dfa, pres: &SyntacticPresentation, d: usize) -> ElementSet {
    let index = element_index(dfa, pres);
    let k = dfa.alphabet().len();
    let mut blocks: HashSet<Vec<usize>> = HashSet::new();
    let mut word = vec![0usize; d];
    loop {
        blocks.insert(transformation(dfa, &word));
        let mut i = d;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            word[i] += 1;
            if word[i] < k {
                break;
            }
            word[i] = 0;
        }
        if word.iter().all(|&l| l == 0) {
            break;
        }
    }
    let identity: Vec<usize> = (0..dfa.state_count()).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
    let mut frontier = vec![identity];
    // At most |M| rounds: each round adds a new element or stops.
    while let Some(t) = frontier.pop() {
        for b in &blocks {
            let next: Vec<usize> = t.iter().map(|&q| b[q]).collect();
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    ElementSet::from_elements(pres.size(), seen.iter().map(|t| index[t]))
}

/// Random formula with letters from `letters`, moduli dividing `d`,
/// quantifier rank at most `rank`, over variables `x` and `y`.
pub fn random_formula(rng: &mut StdRng, letters: &[char], d: u32, rank: u32) -> Formula {
    gen(rng, letters, d, rank, &mut Vec::new(), 3)
}

fn divisor(rng: &mut StdRng, d: u32) -> u32 {
    let divisors: Vec<u32> = (1..=d).filter(|m| d.is_multiple_of(*m)).collect();
    divisors[rng.gen_range(0..divisors.len())]
}

fn gen(
    rng: &mut StdRng,
    letters: &[char],
    d: u32,
    rank: u32,
    bound: &mut Vec<String>,
    size: u32,
) -> Formula {
    let letter = |rng: &mut StdRng| Symbol::plain(letters[rng.gen_range(0..letters.len())]);
    let choice = if size == 0 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..9)
    };
    match choice {
        0..=2 => {
            // Atom; variable atoms only when something is bound.
            let var_atoms = !bound.is_empty();
            let pick = rng.gen_range(0..if var_atoms { 9 } else { 4 });
            let var = |rng: &mut StdRng| bound[rng.gen_range(0..bound.len())].clone();
            match pick {
                0 => {
                    let m = divisor(rng, d);
                    Formula::Length {
                        residue: rng.gen_range(0..m),
                        modulus: m,
                    }
                }
                1 => Formula::Letter {
                    letter: letter(rng),
                    pos: Position::Min(rng.gen_range(0..2)),
                },
                2 => Formula::Letter {
                    letter: letter(rng),
                    pos: Position::Max(rng.gen_range(0..2)),
                },
                3 => {
                    if rng.gen_bool(0.5) {
                        Formula::True
                    } else {
                        Formula::False
                    }
                }
                4 => Formula::Letter {
                    letter: letter(rng),
                    pos: Position::Var {
                        var: var(rng),
                        offset: rng.gen_range(0..2),
                    },
                },
                5 => {
                    let m = divisor(rng, d);
                    Formula::Mod {
                        residue: rng.gen_range(0..m),
                        modulus: m,
                        var: var(rng),
                    }
                }
                6 => Formula::Less(var(rng), var(rng)),
                7 => Formula::Equal(var(rng), var(rng)),
                _ => {
                    if rng.gen_bool(0.5) {
                        Formula::Min(var(rng))
                    } else {
                        Formula::Max(var(rng))
                    }
                }
            }
        }
        3 => Formula::not(gen(rng, letters, d, rank, bound, size - 1)),
        4 | 5 => {
            let parts = (0..2)
                .map(|_| gen(rng, letters, d, rank, bound, size - 1))
                .collect();
            if choice == 4 {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
        _ if rank > 0 => {
            let v = if rng.gen_bool(0.5) { "x" } else { "y" }.to_string();
            bound.push(v.clone());
            let body = gen(rng, letters, d, rank - 1, bound, size);
            bound.pop();
            if rng.gen_bool(0.5) {
                Formula::Exists(v, Box::new(body))
            } else {
                Formula::Forall(v, Box::new(body))
            }
        }
        _ => gen(rng, letters, d, rank, bound, 0),
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `T_1 .. T_kmax` with `T_k = eta(A^k)`, from sets of state
/// transformations.
pub fn powers_oracle(dfa: &Dfa, pres: &SyntacticPresentation, kmax: usize) -> Vec<ElementSet> {
    let index = element_index(dfa, pres);
    let letters: Vec<Vec<usize>> = (0..dfa.alphabet().len())
        .map(|l| transformation(dfa, &[l]))
        .collect();
    let mut current: HashSet<Vec<usize>> = letters.iter().cloned().collect();
    let mut out = Vec::with_capacity(kmax);
    for _ in 0..kmax {
        out.push(ElementSet::from_elements(
            pres.size(),
            current.iter().map(|t| index[t]),
        ));
        current = current
            .iter()
            .flat_map(|t| {
                letters
                    .iter()
                    .map(move |b| t.iter().map(|&q| b[q]).collect())
            })
            .collect();
    }
    out
}
