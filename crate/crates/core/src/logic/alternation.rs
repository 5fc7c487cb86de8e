use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::logic::formula::{Formula, Position};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    fn dual(self) -> Quantifier {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlternationMode {
    /// Blocks of the prenex normal form.
    Prenex,
    /// Largest number of blocks on a branch of the negation normal form;
    /// only for formulas with at most two variable names.
    TwoVariable,
}

/// Number of quantifier blocks, counted according to `mode`.
pub fn alternation_depth(f: &Formula, mode: AlternationMode) -> Result<usize> {
    match mode {
        AlternationMode::Prenex => Ok(prenex_blocks(f).0.len()),
        AlternationMode::TwoVariable => {
            let names = f.variable_names();
            if names.len() > 2 {
                return Err(Error::TooManyVariables(names.len()));
            }
            Ok(branch_blocks(&f.nnf(), None))
        }
    }
}

fn branch_blocks(f: &Formula, last: Option<Quantifier>) -> usize {
    match f {
        Formula::Exists(_, g) | Formula::Forall(_, g) => {
            let q = if matches!(f, Formula::Exists(..)) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            usize::from(last != Some(q)) + branch_blocks(g, Some(q))
        }
        Formula::And(gs) | Formula::Or(gs) => {
            gs.iter().map(|g| branch_blocks(g, last)).max().unwrap_or(0)
        }
        Formula::Not(g) => branch_blocks(g, last),
        _ => 0,
    }
}

/// A prenex formula with the fewest quantifier blocks reachable by renaming
/// bound variables and pulling quantifiers out.
///
/// It is equivalent to `f` on non-empty words. On the empty word pulling a
/// quantifier out of a disjunction or conjunction can change the value.
pub fn prenex_normal_form(f: &Formula) -> Formula {
    let (blocks, matrix) = prenex_blocks(f);
    blocks.into_iter().rev().fold(matrix, |body, (q, vars)| {
        vars.into_iter().rev().fold(body, |body, v| match q {
            Quantifier::Exists => Formula::Exists(v, Box::new(body)),
            Quantifier::Forall => Formula::Forall(v, Box::new(body)),
        })
    })
}

type Blocks = Vec<(Quantifier, Vec<String>)>;

fn prenex_blocks(f: &Formula) -> (Blocks, Formula) {
    let mut used = f.variable_names();
    let renamed = rename_bound(&f.nnf(), &mut used, &mut Vec::new());
    let by_start = [Quantifier::Exists, Quantifier::Forall].map(|t| (t, build(&renamed, t)));
    let (start, (vars, matrix)) = by_start
        .into_iter()
        .min_by_key(|(_, (b, _))| b.iter().skip_while(|v| v.is_empty()).count())
        .expect("two candidates");
    let mut q = start;
    let mut blocks = Vec::new();
    for block in vars {
        if !block.is_empty() {
            blocks.push((q, block));
        }
        q = q.dual();
    }
    (blocks, matrix)
}

fn fresh(base: &str, used: &mut BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|name| used.insert(name.clone()))
        .expect("unbounded supply")
}

fn rename_bound(
    f: &Formula,
    used: &mut BTreeSet<String>,
    scope: &mut Vec<(String, String)>,
) -> Formula {
    let sub = |v: &String, scope: &Vec<(String, String)>| {
        scope
            .iter()
            .rev()
            .find(|(old, _)| old == v)
            .map_or_else(|| v.clone(), |(_, new)| new.clone())
    };
    match f {
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let new = fresh(v, used);
            scope.push((v.clone(), new.clone()));
            let body = Box::new(rename_bound(g, used, scope));
            scope.pop();
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(new, body)
            } else {
                Formula::Forall(new, body)
            }
        }
        Formula::Not(g) => Formula::not(rename_bound(g, used, scope)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| rename_bound(g, used, scope)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| rename_bound(g, used, scope)).collect()),
        Formula::Letter { letter, pos } => Formula::Letter {
            letter: *letter,
            pos: match pos {
                Position::Var { var, offset } => Position::Var {
                    var: sub(var, scope),
                    offset: *offset,
                },
                other => other.clone(),
            },
        },
        Formula::Min(v) => Formula::Min(sub(v, scope)),
        Formula::Max(v) => Formula::Max(sub(v, scope)),
        Formula::Less(a, b) => Formula::Less(sub(a, scope), sub(b, scope)),
        Formula::Equal(a, b) => Formula::Equal(sub(a, scope), sub(b, scope)),
        Formula::Mod {
            residue,
            modulus,
            var,
        } => Formula::Mod {
            residue: *residue,
            modulus: *modulus,
            var: sub(var, scope),
        },
        atom => atom.clone(),
    }
}

/// Prefix blocks of alternating type starting with `start` (the first may
/// be empty) and the matrix. Expects negation normal form with distinct
/// bound variables.
fn build(f: &Formula, start: Quantifier) -> (Vec<Vec<String>>, Formula) {
    match f {
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let q = if matches!(f, Formula::Exists(..)) {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            let (mut same, m1) = build(g, q);
            let (other, m2) = build(g, q.dual());
            let (mut blocks, matrix) = if same.len().max(1) <= other.len() + 1 {
                if same.is_empty() {
                    same.push(Vec::new());
                }
                same[0].insert(0, v.clone());
                (same, m1)
            } else {
                let mut blocks = vec![vec![v.clone()]];
                blocks.extend(other);
                (blocks, m2)
            };
            if q != start {
                blocks.insert(0, Vec::new());
            }
            (blocks, matrix)
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let mut merged: Vec<Vec<String>> = Vec::new();
            let mut matrices = Vec::with_capacity(gs.len());
            for g in gs {
                let (direct, m1) = build(g, start);
                let (mut shifted, m2) = build(g, start.dual());
                let (blocks, matrix) = if direct.len() <= shifted.len() + 1 {
                    (direct, m1)
                } else {
                    shifted.insert(0, Vec::new());
                    (shifted, m2)
                };
                for (i, block) in blocks.into_iter().enumerate() {
                    if merged.len() <= i {
                        merged.push(Vec::new());
                    }
                    merged[i].extend(block);
                }
                matrices.push(matrix);
            }
            let matrix = if matches!(f, Formula::And(_)) {
                Formula::And(matrices)
            } else {
                Formula::Or(matrices)
            };
            (merged, matrix)
        }
        other => (Vec::new(), other.clone()),
    }
}

/// Named fragments of first-order logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FragmentTag {
    Fo,
    Fo2,
    /// Boolean combinations of prenex formulas with at most `k` blocks.
    Bs(u32),
    /// Two-variable formulas with at most `k - 1` alternations.
    Fo2k(u32),
}

pub const FRAGMENT_TAGS: [&str; 5] = ["FO", "FO2", "BS1", "BSk", "FO2k"];

impl FragmentTag {
    /// `k` is required for `BSk` and `FO2k`.
    pub fn parse(name: &str, k: Option<u32>) -> Result<FragmentTag> {
        let need_k = || {
            k.filter(|&k| k >= 1)
                .ok_or_else(|| Error::invalid(format!("{name} needs a positive k")))
        };
        match name {
            "FO" => Ok(FragmentTag::Fo),
            "FO2" => Ok(FragmentTag::Fo2),
            "BS1" => Ok(FragmentTag::Bs(1)),
            "BSk" => Ok(FragmentTag::Bs(need_k()?)),
            "FO2k" => Ok(FragmentTag::Fo2k(need_k()?)),
            other => Err(Error::UnknownFragment(other.to_string())),
        }
    }

    /// Whether `f` syntactically belongs to the fragment.
    pub fn admits(&self, f: &Formula) -> Result<bool> {
        let two_vars = f.variable_names().len() <= 2;
        Ok(match *self {
            FragmentTag::Fo => true,
            FragmentTag::Fo2 => two_vars,
            FragmentTag::Bs(k) => alternation_depth(f, AlternationMode::Prenex)? <= k as usize,
            FragmentTag::Fo2k(k) => {
                two_vars && alternation_depth(f, AlternationMode::TwoVariable)? <= k as usize
            }
        })
    }
}

impl fmt::Display for FragmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FragmentTag::Fo => write!(f, "FO"),
            FragmentTag::Fo2 => write!(f, "FO2"),
            FragmentTag::Bs(k) => write!(f, "BS{k}"),
            FragmentTag::Fo2k(k) => write!(f, "FO2_{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn depth(text: &str, mode: AlternationMode) -> usize {
        alternation_depth(&Formula::parse(text).unwrap(), mode).unwrap()
    }

    #[test]
    fn two_blocks() {
        let f = "(exists x (exists y (forall z (and (lt x z) (lt z y) (letter a x) (letter a y) (letter c z)))))";
        assert_eq!(depth(f, AlternationMode::Prenex), 2);
    }

    #[test]
    fn reused_variable_formula() {
        let f = "(exists x (and (letter a x) (exists y (and (lt x y) (letter b y) (exists x (and (lt y x) (letter a x)))))))";
        assert_eq!(depth(f, AlternationMode::TwoVariable), 1);
        assert_eq!(depth(f, AlternationMode::Prenex), 1);
    }

    #[test]
    fn quantifier_free() {
        assert_eq!(
            depth("(and (letter-min a 0) (D 0 2))", AlternationMode::Prenex),
            0
        );
        assert_eq!(depth("true", AlternationMode::TwoVariable), 0);
    }

    #[test]
    fn negation_flips_blocks() {
        let f = "(not (exists x (forall y (lt x y))))";
        assert_eq!(depth(f, AlternationMode::Prenex), 2);
        let pnf = prenex_normal_form(&Formula::parse(f).unwrap());
        assert!(matches!(pnf, Formula::Forall(..)));
    }

    #[test]
    fn merging_blocks_across_conjuncts() {
        // One side starts with exists, the other with forall: the exists
        // side fits under a leading forall block.
        let f = "(and (exists x (letter a x)) (forall y (exists z (lt y z))))";
        assert_eq!(depth(f, AlternationMode::Prenex), 2);
        let g = "(and (exists x (forall u (lt x u))) (forall y (exists z (lt y z))))";
        assert_eq!(depth(g, AlternationMode::Prenex), 3);
    }

    #[test]
    fn too_many_variables() {
        let f = Formula::parse("(exists x (exists y (exists z (lt x z))))").unwrap();
        assert!(matches!(
            alternation_depth(&f, AlternationMode::TwoVariable),
            Err(Error::TooManyVariables(3))
        ));
    }

    #[test]
    fn fragment_tags() {
        let f = Formula::parse("(exists x (forall y (lt x y)))").unwrap();
        assert!(FragmentTag::parse("FO", None).unwrap().admits(&f).unwrap());
        assert!(!FragmentTag::parse("BS1", None).unwrap().admits(&f).unwrap());
        assert!(FragmentTag::parse("BSk", Some(2))
            .unwrap()
            .admits(&f)
            .unwrap());
        assert!(FragmentTag::parse("FO2k", Some(2))
            .unwrap()
            .admits(&f)
            .unwrap());
        assert!(!FragmentTag::parse("FO2k", Some(1))
            .unwrap()
            .admits(&f)
            .unwrap());
        assert!(FragmentTag::parse("BSk", None).is_err());
        assert!(FragmentTag::parse("MSO", None).is_err());
    }
}
