use std::collections::BTreeSet;
use std::fmt;

use crate::automata::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};

/// A position term inside a letter predicate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    /// `x + offset`
    Var { var: String, offset: u32 },
    /// `min + k`
    Min(u32),
    /// `max - k`
    Max(u32),
}

impl Position {
    pub fn var(name: &str) -> Position {
        Position::Var {
            var: name.to_string(),
            offset: 0,
        }
    }
}

/// First-order formulas over words with order, local and modular predicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// The letter at `pos` is `letter`.
    Letter {
        letter: Symbol,
        pos: Position,
    },
    Min(String),
    Max(String),
    Less(String, String),
    Equal(String, String),
    /// `MOD_residue^modulus(var)`
    Mod {
        residue: u32,
        modulus: u32,
        var: String,
    },
    /// `D_residue^modulus`: the word length is congruent to `residue`.
    Length {
        residue: u32,
        modulus: u32,
    },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn letter(letter: Symbol, var: &str) -> Formula {
        Formula::Letter {
            letter,
            pos: Position::var(var),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(var: &str, f: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(f))
    }

    pub fn forall(var: &str, f: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(f))
    }

    /// Parses the prefix text format, e.g.
    /// `(exists x (and (letter a x) (mod 0 2 x)))`.
    pub fn parse(text: &str) -> Result<Formula> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let sexp = read_sexp(&tokens, &mut pos)?;
        if pos < tokens.len() {
            return Err(Error::syntax(tokens[pos].0, "trailing input"));
        }
        from_sexp(&sexp)
    }

    /// Free variables, sorted.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False | Formula::Length { .. } => {}
            Formula::Letter { pos, .. } => {
                if let Position::Var { var, .. } = pos {
                    see(var);
                }
            }
            Formula::Min(v) | Formula::Max(v) | Formula::Mod { var: v, .. } => see(v),
            Formula::Less(a, b) | Formula::Equal(a, b) => {
                see(a);
                see(b);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// All variable names, bound or free.
    pub fn variable_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Letter {
                pos: Position::Var { var, .. },
                ..
            }
            | Formula::Min(var)
            | Formula::Max(var)
            | Formula::Mod { var, .. }
            | Formula::Exists(var, _)
            | Formula::Forall(var, _) => {
                out.insert(var.clone());
            }
            Formula::Less(a, b) | Formula::Equal(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            _ => {}
        }
    }

    /// Rebuilds the tree bottom-up, replacing every atom through `leaf`.
    pub fn map_atoms(&self, leaf: &mut impl FnMut(&Formula) -> Result<Formula>) -> Result<Formula> {
        Ok(match self {
            Formula::Not(g) => Formula::Not(Box::new(g.map_atoms(leaf)?)),
            Formula::And(gs) => Formula::And(
                gs.iter()
                    .map(|g| g.map_atoms(leaf))
                    .collect::<Result<_>>()?,
            ),
            Formula::Or(gs) => Formula::Or(
                gs.iter()
                    .map(|g| g.map_atoms(leaf))
                    .collect::<Result<_>>()?,
            ),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.map_atoms(leaf)?)),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.map_atoms(leaf)?)),
            atom => leaf(atom)?,
        })
    }

    /// Moduli of all `MOD` and `D` predicates, sorted.
    pub fn moduli(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Mod { modulus, .. } | Formula::Length { modulus, .. } = f {
                out.insert(*modulus);
            }
        });
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        let mut qf = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Exists(..) | Formula::Forall(..)) {
                qf = false;
            }
        });
        qf
    }

    pub fn is_atom(&self) -> bool {
        !matches!(
            self,
            Formula::Not(_)
                | Formula::And(_)
                | Formula::Or(_)
                | Formula::Exists(..)
                | Formula::Forall(..)
        )
    }

    /// Negation normal form: negations only in front of atoms, and
    /// `true`/`false` never negated.
    pub fn nnf(&self) -> Formula {
        self.nnf_signed(true)
    }

    fn nnf_signed(&self, positive: bool) -> Formula {
        match (self, positive) {
            (Formula::Not(g), _) => g.nnf_signed(!positive),
            (Formula::And(gs), true) => {
                Formula::And(gs.iter().map(|g| g.nnf_signed(true)).collect())
            }
            (Formula::And(gs), false) => {
                Formula::Or(gs.iter().map(|g| g.nnf_signed(false)).collect())
            }
            (Formula::Or(gs), true) => Formula::Or(gs.iter().map(|g| g.nnf_signed(true)).collect()),
            (Formula::Or(gs), false) => {
                Formula::And(gs.iter().map(|g| g.nnf_signed(false)).collect())
            }
            (Formula::Exists(v, g), true) => {
                Formula::Exists(v.clone(), Box::new(g.nnf_signed(true)))
            }
            (Formula::Exists(v, g), false) => {
                Formula::Forall(v.clone(), Box::new(g.nnf_signed(false)))
            }
            (Formula::Forall(v, g), true) => {
                Formula::Forall(v.clone(), Box::new(g.nnf_signed(true)))
            }
            (Formula::Forall(v, g), false) => {
                Formula::Exists(v.clone(), Box::new(g.nnf_signed(false)))
            }
            (Formula::True, false) => Formula::False,
            (Formula::False, false) => Formula::True,
            (atom, true) => atom.clone(),
            (atom, false) => Formula::not(atom.clone()),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Position::Var { var, offset: 0 } => write!(f, "{var}"),
            Position::Var { var, offset } => write!(f, "{var}+{offset}"),
            Position::Min(0) => write!(f, "min"),
            Position::Min(k) => write!(f, "min+{k}"),
            Position::Max(0) => write!(f, "max"),
            Position::Max(k) => write!(f, "max-{k}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
            write!(f, "({head}")?;
            for item in items {
                write!(f, " {item}")?;
            }
            write!(f, ")")
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Letter { letter, pos } => match pos {
                Position::Var { var, offset: 0 } => write!(f, "(letter {letter} {var})"),
                Position::Var { var, offset } => write!(f, "(letter-at {letter} {var} +{offset})"),
                Position::Min(k) => write!(f, "(letter-min {letter} {k})"),
                Position::Max(k) => write!(f, "(letter-max {letter} {k})"),
            },
            Formula::Min(v) => write!(f, "(min {v})"),
            Formula::Max(v) => write!(f, "(max {v})"),
            Formula::Less(a, b) => write!(f, "(lt {a} {b})"),
            Formula::Equal(a, b) => write!(f, "(eq {a} {b})"),
            Formula::Mod {
                residue,
                modulus,
                var,
            } => write!(f, "(mod {residue} {modulus} {var})"),
            Formula::Length { residue, modulus } => write!(f, "(D {residue} {modulus})"),
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(gs) => list(f, "and", gs),
            Formula::Or(gs) => list(f, "or", gs),
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        Formula::parse(s)
    }
}

// ---- parsing ----

enum Sexp {
    Atom(usize, String),
    List(usize, Vec<Sexp>),
}

impl Sexp {
    fn position(&self) -> usize {
        match self {
            Sexp::Atom(p, _) | Sexp::List(p, _) => *p,
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, String)>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == ';' {
            // Comment to end of line.
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                chars.next();
            }
        } else if c == '(' || c == ')' {
            tokens.push((i, c.to_string()));
            chars.next();
        } else {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || c == '(' || c == ')' {
                    break;
                }
                s.push(c);
                chars.next();
            }
            tokens.push((i, s));
        }
    }
    if tokens.is_empty() {
        return Err(Error::syntax(0, "empty formula"));
    }
    Ok(tokens)
}

fn read_sexp(tokens: &[(usize, String)], pos: &mut usize) -> Result<Sexp> {
    let Some((at, tok)) = tokens.get(*pos) else {
        let end = tokens.last().map_or(0, |(p, t)| p + t.len());
        return Err(Error::syntax(end, "unexpected end of input"));
    };
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some((_, t)) if t == ")" => {
                        *pos += 1;
                        return Ok(Sexp::List(*at, items));
                    }
                    Some(_) => items.push(read_sexp(tokens, pos)?),
                    None => return Err(Error::syntax(*at, "unclosed `(`")),
                }
            }
        }
        ")" => Err(Error::syntax(*at, "unexpected `)`")),
        _ => Ok(Sexp::Atom(*at, tok.clone())),
    }
}

fn atom(s: &Sexp, what: &str) -> Result<String> {
    match s {
        Sexp::Atom(_, t) => Ok(t.clone()),
        Sexp::List(p, _) => Err(Error::syntax(*p, format!("expected {what}"))),
    }
}

fn variable(s: &Sexp) -> Result<String> {
    let name = atom(s, "a variable")?;
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
    if !ok || matches!(name.as_str(), "true" | "false" | "min" | "max") {
        return Err(Error::syntax(
            s.position(),
            format!("bad variable name `{name}`"),
        ));
    }
    Ok(name)
}

fn number(s: &Sexp) -> Result<u32> {
    let text = atom(s, "a number")?;
    text.strip_prefix('+')
        .unwrap_or(&text)
        .parse()
        .map_err(|_| Error::syntax(s.position(), format!("expected a number, found `{text}`")))
}

fn symbol(s: &Sexp) -> Result<Symbol> {
    let text = atom(s, "a letter")?;
    text.parse()
        .map_err(|_| Error::syntax(s.position(), format!("bad letter `{text}`")))
}

fn modular(residue: &Sexp, modulus: &Sexp) -> Result<(u32, u32)> {
    let (i, d) = (number(residue)?, number(modulus)?);
    if d == 0 || i >= d {
        return Err(Error::syntax(
            residue.position(),
            "need 0 <= residue < modulus",
        ));
    }
    Ok((i, d))
}

fn from_sexp(s: &Sexp) -> Result<Formula> {
    let (at, items) = match s {
        Sexp::Atom(p, t) => {
            return match t.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                _ => Err(Error::syntax(*p, format!("unexpected atom `{t}`"))),
            }
        }
        Sexp::List(p, items) => (*p, items),
    };
    let Some(head) = items.first() else {
        return Err(Error::syntax(at, "empty list"));
    };
    let head = atom(head, "an operator")?;
    let args = &items[1..];
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::syntax(at, format!("`{head}` takes {n} argument(s)")))
        }
    };
    Ok(match head.as_str() {
        "letter" => {
            arity(2)?;
            Formula::Letter {
                letter: symbol(&args[0])?,
                pos: Position::Var {
                    var: variable(&args[1])?,
                    offset: 0,
                },
            }
        }
        "letter-at" => {
            arity(3)?;
            Formula::Letter {
                letter: symbol(&args[0])?,
                pos: Position::Var {
                    var: variable(&args[1])?,
                    offset: number(&args[2])?,
                },
            }
        }
        "letter-min" => {
            arity(2)?;
            Formula::Letter {
                letter: symbol(&args[0])?,
                pos: Position::Min(number(&args[1])?),
            }
        }
        "letter-max" => {
            arity(2)?;
            Formula::Letter {
                letter: symbol(&args[0])?,
                pos: Position::Max(number(&args[1])?),
            }
        }
        "min" => {
            arity(1)?;
            Formula::Min(variable(&args[0])?)
        }
        "max" => {
            arity(1)?;
            Formula::Max(variable(&args[0])?)
        }
        "lt" => {
            arity(2)?;
            Formula::Less(variable(&args[0])?, variable(&args[1])?)
        }
        "eq" => {
            arity(2)?;
            Formula::Equal(variable(&args[0])?, variable(&args[1])?)
        }
        "mod" => {
            arity(3)?;
            let (residue, modulus) = modular(&args[0], &args[1])?;
            Formula::Mod {
                residue,
                modulus,
                var: variable(&args[2])?,
            }
        }
        "D" => {
            arity(2)?;
            let (residue, modulus) = modular(&args[0], &args[1])?;
            Formula::Length { residue, modulus }
        }
        "not" => {
            arity(1)?;
            Formula::not(from_sexp(&args[0])?)
        }
        "and" => Formula::And(args.iter().map(from_sexp).collect::<Result<_>>()?),
        "or" => Formula::Or(args.iter().map(from_sexp).collect::<Result<_>>()?),
        "exists" | "forall" => {
            arity(2)?;
            let v = variable(&args[0])?;
            let body = Box::new(from_sexp(&args[1])?);
            if head == "exists" {
                Formula::Exists(v, body)
            } else {
                Formula::Forall(v, body)
            }
        }
        other => return Err(Error::syntax(at, format!("unknown operator `{other}`"))),
    })
}

// ---- semantics ----

/// Truth of a closed formula on a word; positions are numbered from 0.
pub fn evaluate(f: &Formula, word: &[Symbol]) -> Result<bool> {
    if let Some(v) = f.free_variables().into_iter().next() {
        return Err(Error::FreeVariable(v));
    }
    Ok(eval(f, word, &mut Vec::new()))
}

fn lookup(env: &[(String, usize)], v: &str) -> usize {
    env.iter()
        .rev()
        .find(|(name, _)| name == v)
        .map(|&(_, p)| p)
        .expect("formula is closed")
}

fn eval(f: &Formula, word: &[Symbol], env: &mut Vec<(String, usize)>) -> bool {
    let n = word.len();
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Letter { letter, pos } => {
            let p = match pos {
                Position::Var { var, offset } => Some(lookup(env, var) + *offset as usize),
                Position::Min(k) => Some(*k as usize),
                Position::Max(k) => n.checked_sub(1 + *k as usize),
            };
            p.is_some_and(|p| p < n && word[p] == *letter)
        }
        Formula::Min(v) => lookup(env, v) == 0,
        Formula::Max(v) => lookup(env, v) + 1 == n,
        Formula::Less(a, b) => lookup(env, a) < lookup(env, b),
        Formula::Equal(a, b) => lookup(env, a) == lookup(env, b),
        Formula::Mod {
            residue,
            modulus,
            var,
        } => lookup(env, var) % *modulus as usize == *residue as usize,
        Formula::Length { residue, modulus } => n % *modulus as usize == *residue as usize,
        Formula::Not(g) => !eval(g, word, env),
        Formula::And(gs) => gs.iter().all(|g| eval(g, word, env)),
        Formula::Or(gs) => gs.iter().any(|g| eval(g, word, env)),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let existential = matches!(f, Formula::Exists(..));
            for p in 0..n {
                env.push((v.clone(), p));
                let value = eval(g, word, env);
                env.pop();
                if value == existential {
                    return existential;
                }
            }
            !existential
        }
    }
}

/// The words of length at most `n` satisfying `f`, in shortlex order.
pub fn language_upto(f: &Formula, alphabet: &Alphabet, n: usize) -> Result<Vec<Word>> {
    if let Some(v) = f.free_variables().into_iter().next() {
        return Err(Error::FreeVariable(v));
    }
    Ok(alphabet
        .words_upto(n)
        .into_iter()
        .filter(|w| eval(f, w, &mut Vec::new()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::parse_word;

    fn holds(f: &str, w: &str) -> bool {
        evaluate(&Formula::parse(f).unwrap(), &parse_word(w).unwrap()).unwrap()
    }

    #[test]
    fn first_two_letters() {
        let f = "(and (letter-min a 0) (letter-min a 1))";
        assert!(holds(f, "aab"));
        assert!(!holds(f, "ab"));
        assert!(!holds(f, ""));
    }

    #[test]
    fn a_at_even_position() {
        let f = "(exists x (and (letter a x) (mod 0 2 x)))";
        assert!(!holds(f, "ba"));
        assert!(holds(f, "ab"));
        assert!(holds(f, "bba"));
    }

    #[test]
    fn empty_word_conventions() {
        assert!(holds("true", ""));
        assert!(!holds("(exists x true)", ""));
        assert!(holds("(forall x false)", ""));
        assert!(holds("(D 0 3)", ""));
        assert!(!holds("(D 1 3)", ""));
        assert!(!holds("(letter-max a 0)", ""));
    }

    #[test]
    fn local_predicates_out_of_range() {
        assert!(!holds("(exists x (letter-at a x +1))", "a"));
        assert!(holds("(exists x (letter-at b x +1))", "ab"));
        assert!(holds("(letter-max b 0)", "ab"));
        assert!(holds("(letter-max a 1)", "ab"));
        assert!(!holds("(letter-max a 2)", "ab"));
    }

    #[test]
    fn order_and_endpoints() {
        let f = "(exists x (exists y (and (lt x y) (min x) (max y) (not (eq x y)))))";
        assert!(holds(f, "ab"));
        assert!(!holds(f, "a"));
    }

    #[test]
    fn round_trip_text() {
        for text in [
            "(exists x (and (letter a x) (mod 0 2 x)))",
            "(or (D 1 2) (not (letter-min a@0 0)))",
            "(forall y (or (letter-at b y +2) (letter-max a 1) (min y) (max y)))",
            "(and)",
            "true",
        ] {
            assert_eq!(Formula::parse(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "(",
            "(and",
            "(letter a)",
            "(mod 2 2 x)",
            "(D 0 0)",
            "(exists true true)",
            "(foo)",
            "x",
        ] {
            assert!(Formula::parse(bad).is_err(), "{bad}");
        }
        assert!(matches!(
            evaluate(&Formula::parse("(letter a x)").unwrap(), &[]),
            Err(Error::FreeVariable(_))
        ));
    }

    #[test]
    fn language_of_even_length() {
        let a = Alphabet::from_chars("a").unwrap();
        let words = language_upto(&Formula::parse("(D 0 2)").unwrap(), &a, 3).unwrap();
        assert_eq!(words.len(), 2);
        assert!(words[0].is_empty());
        assert_eq!(words[1].len(), 2);
        assert!(language_upto(&Formula::False, &a, 3).unwrap().is_empty());
    }
}
