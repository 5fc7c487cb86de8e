use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automata::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};

/// A complete deterministic automaton.
///
/// Transitions are stored row-major: `delta[state * |A| + letter]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    finals: Vec<bool>,
    delta: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Complement,
    Difference,
}

impl Dfa {
    /// Builds a complete automaton from a dense transition table.
    pub fn new(
        alphabet: Alphabet,
        state_count: usize,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        delta: Vec<usize>,
    ) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::invalid("automaton needs at least one state"));
        }
        if initial >= state_count {
            return Err(Error::invalid(format!(
                "initial state {initial} out of range"
            )));
        }
        if delta.len() != state_count * alphabet.len() {
            return Err(Error::invalid("transition table is not total"));
        }
        if let Some(&t) = delta.iter().find(|&&t| t >= state_count) {
            return Err(Error::invalid(format!(
                "transition target {t} out of range"
            )));
        }
        let mut flags = vec![false; state_count];
        for f in finals {
            if f >= state_count {
                return Err(Error::invalid(format!("final state {f} out of range")));
            }
            flags[f] = true;
        }
        Ok(Dfa {
            alphabet,
            initial,
            finals: flags,
            delta,
        })
    }

    /// Builds an automaton from a partial transition function; missing
    /// edges go to a fresh sink.
    pub fn from_partial(
        alphabet: Alphabet,
        state_count: usize,
        initial: usize,
        finals: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        let k = alphabet.len();
        let sink = state_count;
        let mut delta = vec![sink; (state_count + 1) * k];
        for (src, letter, dst) in edges {
            if src >= state_count || dst >= state_count || letter >= k {
                return Err(Error::invalid(format!(
                    "transition ({src}, {letter}, {dst}) out of range"
                )));
            }
            delta[src * k + letter] = dst;
        }
        Dfa::new(alphabet, state_count + 1, initial, finals, delta)
    }

    /// The automaton accepting every word.
    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Dfa {
            alphabet,
            initial: 0,
            finals: vec![true],
            delta: vec![0; k],
        }
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        let mut d = Dfa::universal(alphabet);
        d.finals[0] = false;
        d
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
    }

    pub fn accepts_empty(&self) -> bool {
        self.finals[self.initial]
    }

    #[inline]
    pub fn next(&self, state: usize, letter: usize) -> usize {
        self.delta[state * self.alphabet.len() + letter]
    }

    pub fn run(&self, from: usize, letters: &[usize]) -> usize {
        letters.iter().fold(from, |q, &a| self.next(q, a))
    }

    pub fn accepts_indices(&self, letters: &[usize]) -> bool {
        self.finals[self.run(self.initial, letters)]
    }

    /// Membership; words with foreign symbols are rejected.
    pub fn accepts(&self, word: &[Symbol]) -> bool {
        match self.alphabet.indices(word) {
            Ok(letters) => self.accepts_indices(&letters),
            Err(_) => false,
        }
    }

    /// Minimal complete automaton, states numbered breadth-first from the
    /// initial state with letters in alphabet order.
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let reachable = self.reachable_order();
        let mut local = vec![usize::MAX; self.state_count()];
        for (i, &q) in reachable.iter().enumerate() {
            local[q] = i;
        }
        let n = reachable.len();
        let succ = |i: usize, a: usize| local[self.next(reachable[i], a)];

        // Moore refinement.
        let mut class: Vec<usize> = reachable.iter().map(|&q| self.finals[q] as usize).collect();
        let mut count = class.iter().copied().collect::<BTreeSet<_>>().len();
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next_class = vec![0; n];
            for i in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[i]);
                sig.extend((0..k).map(|a| class[succ(i, a)]));
                let fresh = ids.len();
                next_class[i] = *ids.entry(sig).or_insert(fresh);
            }
            let next_count = ids.len();
            class = next_class;
            if next_count == count {
                break;
            }
            count = next_count;
        }

        // Canonical breadth-first numbering of the classes.
        let mut rep = vec![usize::MAX; count];
        for i in (0..n).rev() {
            rep[class[i]] = i;
        }
        let mut number = vec![usize::MAX; count];
        let mut order = Vec::with_capacity(count);
        let mut queue = VecDeque::new();
        let start = class[0];
        number[start] = 0;
        order.push(start);
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            for a in 0..k {
                let t = class[succ(rep[c], a)];
                if number[t] == usize::MAX {
                    number[t] = order.len();
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let mut delta = vec![0; count * k];
        let mut finals = vec![false; count];
        for (new, &c) in order.iter().enumerate() {
            finals[new] = self.finals[reachable[rep[c]]];
            for a in 0..k {
                delta[new * k + a] = number[class[succ(rep[c], a)]];
            }
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            initial: 0,
            finals,
            delta,
        }
    }

    fn reachable_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..self.alphabet.len() {
                let t = self.next(q, a);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        for f in d.finals.iter_mut() {
            *f = !*f;
        }
        d.minimize()
    }

    /// Boolean combination of languages over the same alphabet.
    pub fn combine(op: SetOp, lhs: &Dfa, rhs: Option<&Dfa>) -> Result<Dfa> {
        if op == SetOp::Complement {
            return Ok(lhs.complement());
        }
        let rhs = rhs.ok_or_else(|| Error::invalid("binary operation needs two operands"))?;
        if lhs.alphabet != rhs.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let accept = |x: bool, y: bool| match op {
            SetOp::Union => x || y,
            SetOp::Intersection => x && y,
            SetOp::Difference => x && !y,
            SetOp::Complement => unreachable!(),
        };
        let k = lhs.alphabet.len();
        let m = rhs.state_count();
        let n = lhs.state_count() * m;
        let mut delta = vec![0; n * k];
        let mut finals = Vec::new();
        for p in 0..lhs.state_count() {
            for q in 0..m {
                let s = p * m + q;
                if accept(lhs.finals[p], rhs.finals[q]) {
                    finals.push(s);
                }
                for a in 0..k {
                    delta[s * k + a] = lhs.next(p, a) * m + rhs.next(q, a);
                }
            }
        }
        let product = Dfa::new(
            lhs.alphabet.clone(),
            n,
            lhs.initial * m + rhs.initial,
            finals,
            delta,
        )?;
        Ok(product.minimize())
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        Dfa::combine(SetOp::Union, self, Some(other))
    }

    pub fn intersection(&self, other: &Dfa) -> Result<Dfa> {
        Dfa::combine(SetOp::Intersection, self, Some(other))
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        Dfa::combine(SetOp::Difference, self, Some(other))
    }

    pub fn is_empty_language(&self) -> bool {
        self.reachable_order().iter().all(|&q| !self.finals[q])
    }

    /// Same language (alphabets must agree).
    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.alphabet == other.alphabet && self.minimize() == other.minimize()
    }

    /// The line-based text format: `alphabet:`, `states:`, `initial:`,
    /// `finals:` and one `trans:` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("alphabet: {}\n", self.alphabet));
        out.push_str(&format!("states: {}\n", self.state_count()));
        out.push_str(&format!("initial: {}\n", self.initial));
        let finals: Vec<String> = self.finals().map(|f| f.to_string()).collect();
        if finals.is_empty() {
            out.push_str("finals:\n");
        } else {
            out.push_str(&format!("finals: {}\n", finals.join(" ")));
        }
        for q in 0..self.state_count() {
            for (a, s) in self.alphabet.symbols().iter().enumerate() {
                out.push_str(&format!("trans: {} {} {}\n", q, s, self.next(q, a)));
            }
        }
        out
    }

    /// Parses the text format. Missing edges go to an implicit sink; the
    /// result is not minimized.
    pub fn from_text(text: &str) -> Result<Dfa> {
        let mut alphabet = None;
        let mut states = None;
        let mut initial = None;
        let mut finals = Vec::new();
        let mut edges = Vec::new();
        let mut offset = 0;
        for raw in text.lines() {
            let line_start = offset;
            offset += raw.len() + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(':').ok_or_else(|| {
                Error::syntax(line_start, format!("expected `key: value`, got `{line}`"))
            })?;
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let number = |s: &str| {
                s.parse::<usize>().map_err(|_| {
                    Error::syntax(line_start, format!("expected a state number, got `{s}`"))
                })
            };
            match key.trim() {
                "alphabet" => {
                    let symbols = fields
                        .iter()
                        .map(|f| f.parse::<Symbol>())
                        .collect::<Result<Vec<_>>>()?;
                    alphabet = Some(Alphabet::new(symbols)?);
                }
                "states" => states = Some(number(fields.first().copied().unwrap_or(""))?),
                "initial" => initial = Some(number(fields.first().copied().unwrap_or(""))?),
                "finals" => {
                    for f in &fields {
                        finals.push(number(f)?);
                    }
                }
                "trans" => {
                    if fields.len() != 3 {
                        return Err(Error::syntax(
                            line_start,
                            "expected `trans: src letter dst`",
                        ));
                    }
                    edges.push((
                        number(fields[0])?,
                        fields[1].parse::<Symbol>()?,
                        number(fields[2])?,
                    ));
                }
                other => {
                    return Err(Error::syntax(line_start, format!("unknown key `{other}`")));
                }
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::syntax(0, "missing `alphabet:` line"))?;
        let states = states.ok_or_else(|| Error::syntax(0, "missing `states:` line"))?;
        let initial = initial.ok_or_else(|| Error::syntax(0, "missing `initial:` line"))?;
        let mut indexed = Vec::with_capacity(edges.len());
        for (src, sym, dst) in edges {
            let a = alphabet
                .index_of(sym)
                .ok_or_else(|| Error::UnknownLetter(sym.to_string()))?;
            indexed.push((src, a, dst));
        }
        Dfa::from_partial(alphabet, states, initial, finals, indexed)
    }
}

impl fmt::Display for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Nondeterministic automaton with epsilon moves; internal to the
/// constructions that need subset construction.
#[derive(Clone, Debug, Default)]
pub(crate) struct Nfa {
    pub(crate) letters: Vec<Vec<(usize, usize)>>,
    pub(crate) epsilon: Vec<Vec<usize>>,
    pub(crate) finals: Vec<bool>,
}

impl Nfa {
    pub(crate) fn add_state(&mut self) -> usize {
        self.letters.push(Vec::new());
        self.epsilon.push(Vec::new());
        self.finals.push(false);
        self.letters.len() - 1
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.epsilon[q] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    /// Subset construction followed by minimization.
    pub(crate) fn determinize(&self, alphabet: Alphabet, initial: usize) -> Dfa {
        let k = alphabet.len();
        let mut start = BTreeSet::from([initial]);
        self.closure(&mut start);
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            for a in 0..k {
                let mut target = BTreeSet::new();
                for &q in &sets[i] {
                    for &(letter, t) in &self.letters[q] {
                        if letter == a {
                            target.insert(t);
                        }
                    }
                }
                self.closure(&mut target);
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        sets.push(target.clone());
                        ids.insert(target, sets.len() - 1);
                        sets.len() - 1
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let finals: Vec<usize> = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.iter().any(|&q| self.finals[q]))
            .map(|(i, _)| i)
            .collect();
        Dfa::new(alphabet, sets.len(), 0, finals, delta)
            .expect("subset construction yields a complete automaton")
            .minimize()
    }
}
