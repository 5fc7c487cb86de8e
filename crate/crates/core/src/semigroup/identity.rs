//! Omega-term identities and their exhaustive verification on finite
//! presentations.

use std::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::semigroup::elements::ElementSet;
use crate::semigroup::presentation::SyntacticPresentation;

/// A term built from single-letter variables by concatenation, omega
/// power (`^w`) and positive integer powers (`^n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaTerm {
    Var(char),
    Concat(Vec<OmegaTerm>),
    Omega(Box<OmegaTerm>),
    Power(Box<OmegaTerm>, u32),
}

impl OmegaTerm {
    pub fn parse(text: &str) -> Result<OmegaTerm> {
        let tokens: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut p = TermParser { tokens, pos: 0 };
        let term = p.sequence()?;
        if let Some(&(at, c)) = p.tokens.get(p.pos) {
            return Err(Error::syntax(at, format!("unexpected `{c}`")));
        }
        Ok(term)
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self, out: &mut Vec<char>) {
        match self {
            OmegaTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            OmegaTerm::Concat(items) => items.iter().for_each(|t| t.variables(out)),
            OmegaTerm::Omega(t) | OmegaTerm::Power(t, _) => t.variables(out),
        }
    }

    /// Value under `assignment`, indexed like `vars`.
    pub fn eval(&self, pres: &SyntacticPresentation, vars: &[char], assignment: &[u32]) -> u32 {
        match self {
            OmegaTerm::Var(v) => {
                let i = vars.iter().position(|w| w == v).expect("variable indexed");
                assignment[i]
            }
            OmegaTerm::Concat(items) => {
                let mut it = items.iter().map(|t| t.eval(pres, vars, assignment));
                let first = it.next().expect("non-empty concatenation");
                it.fold(first, |acc, y| pres.mul(acc, y))
            }
            OmegaTerm::Omega(t) => pres.omega_power(t.eval(pres, vars, assignment)),
            OmegaTerm::Power(t, n) => {
                let x = t.eval(pres, vars, assignment);
                (1..*n).fold(x, |acc, _| pres.mul(acc, x))
            }
        }
    }

    fn compile(&self, vars: &[char]) -> Compiled {
        match self {
            OmegaTerm::Var(v) => Compiled::Var(vars.iter().position(|w| w == v).unwrap()),
            OmegaTerm::Concat(items) => {
                Compiled::Concat(items.iter().map(|t| t.compile(vars)).collect())
            }
            OmegaTerm::Omega(t) => Compiled::Omega(Box::new(t.compile(vars))),
            OmegaTerm::Power(t, n) => Compiled::Power(Box::new(t.compile(vars)), *n),
        }
    }

    /// True when every occurrence of `v` is exactly the subterm `v^w`.
    fn only_under_omega(&self, v: char) -> bool {
        match self {
            OmegaTerm::Var(w) => *w != v,
            OmegaTerm::Omega(inner) if **inner == OmegaTerm::Var(v) => true,
            OmegaTerm::Concat(items) => items.iter().all(|t| t.only_under_omega(v)),
            OmegaTerm::Omega(t) | OmegaTerm::Power(t, _) => t.only_under_omega(v),
        }
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(t: &OmegaTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                OmegaTerm::Var(v) => write!(f, "{v}"),
                other => write!(f, "({other})"),
            }
        }
        match self {
            OmegaTerm::Var(v) => write!(f, "{v}"),
            OmegaTerm::Concat(items) => {
                for (i, t) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match t {
                        OmegaTerm::Concat(_) => write!(f, "({t})")?,
                        _ => write!(f, "{t}")?,
                    }
                }
                Ok(())
            }
            OmegaTerm::Omega(t) => {
                atom(t, f)?;
                f.write_str("^w")
            }
            OmegaTerm::Power(t, n) => {
                atom(t, f)?;
                write!(f, "^{n}")
            }
        }
    }
}

enum Compiled {
    Var(usize),
    Concat(Vec<Compiled>),
    Omega(Box<Compiled>),
    Power(Box<Compiled>, u32),
}

impl Compiled {
    fn eval(&self, pres: &SyntacticPresentation, assignment: &[u32]) -> u32 {
        match self {
            Compiled::Var(i) => assignment[*i],
            Compiled::Concat(items) => {
                let mut acc = items[0].eval(pres, assignment);
                for t in &items[1..] {
                    acc = pres.mul(acc, t.eval(pres, assignment));
                }
                acc
            }
            Compiled::Omega(t) => pres.omega_power(t.eval(pres, assignment)),
            Compiled::Power(t, n) => {
                let x = t.eval(pres, assignment);
                (1..*n).fold(x, |acc, _| pres.mul(acc, x))
            }
        }
    }
}

struct TermParser {
    tokens: Vec<(usize, char)>,
    pos: usize,
}

impl TermParser {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).map(|&(_, c)| c)
    }

    fn at(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(usize::MAX)
    }

    fn sequence(&mut self) -> Result<OmegaTerm> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == ')' {
                break;
            }
            items.push(self.postfix()?);
        }
        match items.len() {
            0 => Err(Error::syntax(self.at(), "empty term")),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(OmegaTerm::Concat(items)),
        }
    }

    fn postfix(&mut self) -> Result<OmegaTerm> {
        let mut t = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            match self.peek() {
                Some('w') | Some('ω') => {
                    self.pos += 1;
                    t = OmegaTerm::Omega(Box::new(t));
                }
                Some(c) if c.is_ascii_digit() => {
                    let mut n: u32 = 0;
                    while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
                        n = n.saturating_mul(10).saturating_add(d);
                        self.pos += 1;
                    }
                    if n == 0 {
                        return Err(Error::syntax(self.at(), "exponent must be positive"));
                    }
                    t = OmegaTerm::Power(Box::new(t), n);
                }
                _ => {
                    return Err(Error::syntax(
                        self.at(),
                        "expected `w` or a number after `^`",
                    ))
                }
            }
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<OmegaTerm> {
        let at = self.at();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.sequence()?;
                if self.peek() != Some(')') {
                    return Err(Error::syntax(self.at(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_alphabetic() => {
                self.pos += 1;
                Ok(OmegaTerm::Var(c))
            }
            Some(c) => Err(Error::syntax(at, format!("unexpected `{c}`"))),
            None => Err(Error::syntax(at, "unexpected end of term")),
        }
    }
}

/// One identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: OmegaTerm,
    pub rhs: OmegaTerm,
}

impl Equation {
    pub fn parse(text: &str) -> Result<Equation> {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| Error::syntax(0, "expected `lhs = rhs`"))?;
        Ok(Equation {
            lhs: OmegaTerm::parse(l)?,
            rhs: OmegaTerm::parse(r).map_err(|e| match e {
                Error::Syntax { position, message } => Error::Syntax {
                    position: position.saturating_add(l.len() + 1),
                    message,
                },
                other => other,
            })?,
        })
    }

    /// Variables of both sides, in order of first occurrence.
    pub fn variables(&self) -> Vec<char> {
        let mut vars = Vec::new();
        self.lhs.variables(&mut vars);
        self.rhs.variables(&mut vars);
        vars
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A named set of identities defining a variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySet {
    pub name: String,
    pub equations: Vec<Equation>,
}

/// Names accepted by [`IdentitySet::builtin`].
pub const BUILTIN_IDENTITY_SETS: &[&str] = &["A", "ACom", "Com", "DA", "J", "J1", "FO[+1]"];

impl IdentitySet {
    /// Parses one equation per line; blank lines and `#` comments are skipped.
    pub fn parse(name: &str, text: &str) -> Result<IdentitySet> {
        let mut equations = Vec::new();
        let mut offset = 0;
        for line in text.lines() {
            let start = offset;
            offset += line.len() + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            equations.push(Equation::parse(body).map_err(|e| match e {
                Error::Syntax { position, message } => Error::Syntax {
                    position: start.saturating_add(position),
                    message,
                },
                other => other,
            })?);
        }
        if equations.is_empty() {
            return Err(Error::invalid("identity set has no equation"));
        }
        Ok(IdentitySet {
            name: name.to_string(),
            equations,
        })
    }

    /// The built-in varieties: aperiodic, aperiodic commutative,
    /// commutative, DA, J, semilattices (J1), and the FO[+1] identity.
    pub fn builtin(name: &str) -> Option<IdentitySet> {
        let text = match name {
            "A" => "x^w = x^w x",
            "ACom" => "x^w = x^w x\nx y = y x",
            "Com" => "x y = y x",
            "DA" => "(x y)^w = (x y)^w x (x y)^w",
            "J" => "y (x y)^w = (x y)^w\n(x y)^w = (x y)^w x",
            "J1" => "x^2 = x\nx y = y x",
            "FO[+1]" => "x^w u y^w v x^w w y^w = x^w w y^w v x^w u y^w",
            _ => return None,
        };
        Some(IdentitySet::parse(name, text).expect("built-in identities parse"))
    }
}

/// A failing assignment for one equation of an identity set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWitness {
    pub equation: usize,
    pub assignment: Vec<(char, u32)>,
    pub lhs: u32,
    pub rhs: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    Holds,
    Fails(IdentityWitness),
}

impl IdentityVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, IdentityVerdict::Holds)
    }

    pub fn witness(&self) -> Option<&IdentityWitness> {
        match self {
            IdentityVerdict::Holds => None,
            IdentityVerdict::Fails(w) => Some(w),
        }
    }
}

/// Checks every equation of `ids` under every assignment of its variables
/// to elements of `within` (default: all elements).
///
/// The witness is the lexicographically least failing assignment of the
/// first failing equation, variables taken in order of first occurrence.
/// A variable that only occurs as `v^w` is enumerated over one
/// representative per omega value; the least representative is kept, so
/// the witness is unchanged.
pub fn check_identity(
    pres: &SyntacticPresentation,
    ids: &IdentitySet,
    within: Option<&ElementSet>,
    limits: &Limits,
) -> Result<IdentityVerdict> {
    let base = within.cloned().unwrap_or_else(|| pres.all());
    let elements = base.to_vec();
    for (index, eq) in ids.equations.iter().enumerate() {
        let vars = eq.variables();
        let domains: Vec<Vec<u32>> = vars
            .iter()
            .map(|&v| {
                if eq.lhs.only_under_omega(v) && eq.rhs.only_under_omega(v) {
                    let mut seen = ElementSet::empty(pres.size());
                    elements
                        .iter()
                        .copied()
                        .filter(|&x| seen.insert(pres.omega_power(x)))
                        .collect()
                } else {
                    elements.clone()
                }
            })
            .collect();
        if domains.iter().any(Vec::is_empty) {
            continue;
        }
        let space = domains
            .iter()
            .try_fold(1u128, |acc, d| acc.checked_mul(d.len() as u128))
            .unwrap_or(u128::MAX);
        if space > limits.max_assignments {
            return Err(Error::Guard {
                what: "identity assignment space",
                actual: space,
                cap: limits.max_assignments,
                flag: "--max-assignments",
            });
        }
        let lhs = eq.lhs.compile(&vars);
        let rhs = eq.rhs.compile(&vars);
        let mut digits = vec![0usize; vars.len()];
        let mut assignment: Vec<u32> = domains.iter().map(|d| d[0]).collect();
        'assignments: loop {
            let l = lhs.eval(pres, &assignment);
            let r = rhs.eval(pres, &assignment);
            if l != r {
                return Ok(IdentityVerdict::Fails(IdentityWitness {
                    equation: index,
                    assignment: vars
                        .iter()
                        .copied()
                        .zip(assignment.iter().copied())
                        .collect(),
                    lhs: l,
                    rhs: r,
                }));
            }
            // Odometer: the last variable varies fastest.
            for i in (0..vars.len()).rev() {
                digits[i] += 1;
                if digits[i] < domains[i].len() {
                    assignment[i] = domains[i][digits[i]];
                    continue 'assignments;
                }
                digits[i] = 0;
                assignment[i] = domains[i][0];
            }
            break;
        }
    }
    Ok(IdentityVerdict::Holds)
}

/// Re-evaluates a witness; true when it still separates the two sides.
pub fn witness_fails(pres: &SyntacticPresentation, ids: &IdentitySet, w: &IdentityWitness) -> bool {
    let eq = &ids.equations[w.equation];
    let vars = eq.variables();
    let assignment: Vec<u32> = vars
        .iter()
        .map(|v| {
            w.assignment
                .iter()
                .find(|(x, _)| x == v)
                .map(|&(_, e)| e)
                .unwrap()
        })
        .collect();
    let l = eq.lhs.eval(pres, &vars, &assignment);
    let r = eq.rhs.eval(pres, &vars, &assignment);
    l != r && l == w.lhs && r == w.rhs
}
