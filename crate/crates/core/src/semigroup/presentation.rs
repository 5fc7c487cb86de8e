use std::collections::HashMap;

use crate::automata::{format_word, Alphabet, Dfa, Word};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::semigroup::elements::ElementSet;

/// A finite monoid or semigroup given by its multiplication table, with an
/// optional letter morphism and accepting set.
///
/// For a language this is the syntactic monoid `M_L` realised as the
/// transition monoid of the minimal automaton: element 0 is the identity
/// (the image of the empty word), and elements are numbered in shortlex
/// order of their least generator word.
#[derive(Clone, Debug)]
pub struct SyntacticPresentation {
    size: usize,
    mult: Vec<u32>,
    identity: Option<u32>,
    alphabet: Option<Alphabet>,
    letter_image: Vec<u32>,
    accepting: ElementSet,
    words: Vec<Option<Word>>,
    semigroup: ElementSet,
    omega: Vec<u32>,
}

impl SyntacticPresentation {
    /// Syntactic monoid of the language of `dfa`.
    pub fn syntactic_morphism(dfa: &Dfa, limits: &Limits) -> Result<Self> {
        Self::transition_monoid(&dfa.minimize(), limits)
    }

    /// Transition monoid of `dfa` as given (no minimization).
    pub fn transition_monoid(dfa: &Dfa, limits: &Limits) -> Result<Self> {
        let n = dfa.state_count();
        let k = dfa.alphabet().len();
        let identity: Vec<u32> = (0..n as u32).collect();
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut maps = vec![identity.clone()];
        let mut words: Vec<Option<Word>> = vec![Some(Vec::new())];
        let mut parent: Vec<(u32, usize)> = vec![(0, usize::MAX)];
        index.insert(identity, 0);
        // right[x * k + a] = x . eta(a)
        let mut right: Vec<u32> = Vec::new();
        let mut i = 0;
        while i < maps.len() {
            for a in 0..k {
                let next: Vec<u32> = maps[i]
                    .iter()
                    .map(|&q| dfa.next(q as usize, a) as u32)
                    .collect();
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        if maps.len() >= limits.max_monoid {
                            return Err(Error::Guard {
                                what: "syntactic monoid size",
                                actual: maps.len() as u128 + 1,
                                cap: limits.max_monoid as u128,
                                flag: "--max-monoid",
                            });
                        }
                        let id = maps.len() as u32;
                        let mut w = words[i].clone().expect("generated element");
                        w.push(dfa.alphabet().get(a));
                        words.push(Some(w));
                        parent.push((i as u32, a));
                        index.insert(next.clone(), id);
                        maps.push(next);
                        id
                    }
                };
                right.push(id);
            }
            i += 1;
        }
        let size = maps.len();
        // Row x of the table, built column by column along the BFS tree.
        let mut mult = vec![0u32; size * size];
        for x in 0..size {
            mult[x * size] = x as u32;
            for y in 1..size {
                let (p, a) = parent[y];
                let xp = mult[x * size + p as usize];
                mult[x * size + y] = right[xp as usize * k + a];
            }
        }
        let letter_image: Vec<u32> = (0..k).map(|a| right[a]).collect();
        let accepting = ElementSet::from_elements(
            size,
            (0..size as u32).filter(|&x| dfa.is_final(maps[x as usize][dfa.initial()] as usize)),
        );
        let mut pres = SyntacticPresentation {
            size,
            mult,
            identity: Some(0),
            alphabet: Some(dfa.alphabet().clone()),
            letter_image,
            accepting,
            words,
            semigroup: ElementSet::empty(size),
            omega: Vec::new(),
        };
        pres.semigroup = pres.closure(pres.letter_image.iter().copied());
        pres.omega = pres.compute_omegas();
        Ok(pres)
    }

    /// A presentation from an explicit table, checked for associativity.
    /// The semigroup part is the whole table.
    pub fn from_table(size: usize, mult: Vec<u32>, identity: Option<u32>) -> Result<Self> {
        if size == 0 || mult.len() != size * size {
            return Err(Error::invalid("table must be square and non-empty"));
        }
        if mult.iter().any(|&v| v as usize >= size) {
            return Err(Error::invalid("table entry out of range"));
        }
        let at = |x: usize, y: usize| mult[x * size + y] as usize;
        for x in 0..size {
            for y in 0..size {
                let xy = at(x, y);
                for z in 0..size {
                    if at(xy, z) != at(x, at(y, z)) {
                        return Err(Error::NotAssociative(x as u32, y as u32, z as u32));
                    }
                }
            }
        }
        if let Some(e) = identity {
            let e = e as usize;
            if e >= size || (0..size).any(|x| at(e, x) != x || at(x, e) != x) {
                return Err(Error::invalid("declared identity is not neutral"));
            }
        }
        let mut pres = SyntacticPresentation {
            size,
            mult,
            identity,
            alphabet: None,
            letter_image: Vec::new(),
            accepting: ElementSet::empty(size),
            words: vec![None; size],
            semigroup: ElementSet::full(size),
            omega: Vec::new(),
        };
        pres.omega = pres.compute_omegas();
        Ok(pres)
    }

    /// Attaches a letter morphism; the semigroup part becomes the
    /// subsemigroup generated by the images.
    pub fn with_letters(mut self, alphabet: Alphabet, images: Vec<u32>) -> Result<Self> {
        if images.len() != alphabet.len() || images.iter().any(|&x| x as usize >= self.size) {
            return Err(Error::invalid("one valid image per letter is required"));
        }
        self.alphabet = Some(alphabet);
        self.letter_image = images;
        self.semigroup = self.closure(self.letter_image.iter().copied());
        self.words = self.generator_words();
        if let Some(e) = self.identity {
            self.words[e as usize] = Some(Vec::new());
        }
        Ok(self)
    }

    pub fn with_accepting(mut self, accepting: ElementSet) -> Self {
        self.accepting = accepting;
        self
    }

    fn generator_words(&self) -> Vec<Option<Word>> {
        let alphabet = self.alphabet.as_ref().expect("letters attached");
        let mut words: Vec<Option<Word>> = vec![None; self.size];
        let mut queue = Vec::new();
        for (a, &x) in self.letter_image.iter().enumerate() {
            if words[x as usize].is_none() {
                words[x as usize] = Some(vec![alphabet.get(a)]);
                queue.push(x);
            }
        }
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (a, &g) in self.letter_image.iter().enumerate() {
                let y = self.mul(x, g);
                if words[y as usize].is_none() {
                    let mut w = words[x as usize].clone().unwrap();
                    w.push(alphabet.get(a));
                    words[y as usize] = Some(w);
                    queue.push(y);
                }
            }
            i += 1;
        }
        words
    }

    fn compute_omegas(&self) -> Vec<u32> {
        (0..self.size as u32)
            .map(|x| {
                let mut p = x;
                for _ in 0..=self.size {
                    if self.mul(p, p) == p {
                        return p;
                    }
                    p = self.mul(p, x);
                }
                unreachable!("every element of a finite semigroup has an idempotent power")
            })
            .collect()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mult[x as usize * self.size + y as usize]
    }

    pub fn product(&self, factors: &[u32]) -> Option<u32> {
        let (&first, rest) = factors.split_first()?;
        Some(rest.iter().fold(first, |acc, &y| self.mul(acc, y)))
    }

    /// The idempotent power `x^w`.
    #[inline]
    pub fn omega_power(&self, x: u32) -> u32 {
        self.omega[x as usize]
    }

    pub fn identity(&self) -> Option<u32> {
        self.identity
    }

    pub fn alphabet(&self) -> Option<&Alphabet> {
        self.alphabet.as_ref()
    }

    pub fn letter_images(&self) -> &[u32] {
        &self.letter_image
    }

    pub fn accepting(&self) -> &ElementSet {
        &self.accepting
    }

    /// Every element, identity included.
    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.size)
    }

    /// `eta(A^+)` when letters are attached, otherwise the whole table.
    pub fn semigroup_part(&self) -> &ElementSet {
        &self.semigroup
    }

    /// Image of a word under the letter morphism.
    pub fn eval_word(&self, letters: &[usize]) -> u32 {
        letters
            .iter()
            .fold(self.identity.unwrap_or(u32::MAX), |acc, &a| {
                let g = self.letter_image[a];
                if acc == u32::MAX {
                    g
                } else {
                    self.mul(acc, g)
                }
            })
    }

    /// The shortlex-least generator word of `x`, when known.
    pub fn element_word(&self, x: u32) -> Option<&[crate::automata::Symbol]> {
        self.words[x as usize].as_deref()
    }

    /// Human-readable name: the generator word, `1` for the empty word, or
    /// `#index` for table-only elements.
    pub fn element_label(&self, x: u32) -> String {
        match self.element_word(x) {
            Some([]) => "1".to_string(),
            Some(w) => format_word(w),
            None => format!("#{x}"),
        }
    }

    pub fn element_labels(&self, set: &ElementSet) -> Vec<String> {
        set.iter().map(|x| self.element_label(x)).collect()
    }

    /// Subsemigroup generated by `generators`.
    pub fn closure(&self, generators: impl IntoIterator<Item = u32>) -> ElementSet {
        let gens: Vec<u32> = generators.into_iter().collect();
        let mut set = ElementSet::from_elements(self.size, gens.iter().copied());
        let mut queue: Vec<u32> = set.to_vec();
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
            i += 1;
        }
        set
    }

    pub fn is_closed(&self, set: &ElementSet) -> bool {
        set.iter()
            .all(|x| set.iter().all(|y| set.contains(self.mul(x, y))))
    }

    /// Setwise product `X * Y`.
    pub fn set_product(&self, xs: &ElementSet, ys: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.size);
        for x in xs.iter() {
            for y in ys.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    fn considered(&self, within: Option<&ElementSet>) -> ElementSet {
        within.cloned().unwrap_or_else(|| self.all())
    }

    /// `E(S)`, restricted to `within` when given.
    pub fn idempotents(&self, within: Option<&ElementSet>) -> ElementSet {
        let base = self.considered(within);
        ElementSet::from_elements(self.size, base.iter().filter(|&x| self.mul(x, x) == x))
    }

    /// The local monoid `eXe`.
    pub fn local_monoid(&self, e: u32, within: Option<&ElementSet>) -> Result<ElementSet> {
        if self.mul(e, e) != e {
            return Err(Error::NotIdempotent(e));
        }
        let base = self.considered(within);
        Ok(ElementSet::from_elements(
            self.size,
            base.iter().map(|x| self.mul(self.mul(e, x), e)),
        ))
    }

    /// The idempotents' ideal `X E(X) X`, with `x` and `y` ranging over
    /// `X` plus an implicit identity.
    pub fn idempotents_ideal(&self, within: Option<&ElementSet>) -> Result<ElementSet> {
        let base = self.considered(within);
        if !self.is_closed(&base) {
            return Err(Error::NotClosed);
        }
        let mut left = self.idempotents(Some(&base));
        let products = self.set_product(&base, &left);
        left.union_with(&products);
        let mut ideal = left.clone();
        ideal.union_with(&self.set_product(&left, &base));
        Ok(ideal)
    }

    /// Sub-presentation on a closed subset, renumbered in element order.
    /// Returns the restricted table and the old indices of its elements.
    pub fn restrict(&self, set: &ElementSet) -> Result<(SyntacticPresentation, Vec<u32>)> {
        if !self.is_closed(set) || set.is_empty() {
            return Err(Error::NotClosed);
        }
        let old: Vec<u32> = set.to_vec();
        let mut new_of = vec![u32::MAX; self.size];
        for (i, &x) in old.iter().enumerate() {
            new_of[x as usize] = i as u32;
        }
        let n = old.len();
        let mut mult = Vec::with_capacity(n * n);
        for &x in &old {
            for &y in &old {
                mult.push(new_of[self.mul(x, y) as usize]);
            }
        }
        let identity = self
            .identity
            .filter(|&e| set.contains(e))
            .map(|e| new_of[e as usize]);
        let mut sub = SyntacticPresentation::from_table(n, mult, identity)?;
        sub.words = old
            .iter()
            .map(|&x| self.words[x as usize].clone())
            .collect();
        Ok((sub, old))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Regex;

    fn pres(re: &str, letters: &str) -> SyntacticPresentation {
        let a = Alphabet::from_chars(letters).unwrap();
        let dfa = Regex::parse(re).unwrap().to_dfa(Some(&a)).unwrap();
        SyntacticPresentation::syntactic_morphism(&dfa, &Limits::default()).unwrap()
    }

    /// Brute-force syntactic congruence: two words are equivalent when no
    /// context `(u, v)` with `|u|, |v| <= n` separates them.
    fn nerode_classes(dfa: &Dfa, word_len: usize, context_len: usize) -> usize {
        let words = dfa.alphabet().words_upto(word_len);
        let contexts = dfa.alphabet().words_upto(context_len);
        let profile = |w: &Word| -> Vec<bool> {
            let mut out = Vec::new();
            for u in &contexts {
                for v in &contexts {
                    let mut x = u.clone();
                    x.extend_from_slice(w);
                    x.extend_from_slice(v);
                    out.push(dfa.accepts(&x));
                }
            }
            out
        };
        let mut profiles: Vec<Vec<bool>> = words.iter().map(profile).collect();
        profiles.sort();
        profiles.dedup();
        profiles.len()
    }

    #[test]
    fn even_a_monoid_is_the_two_element_group() {
        let m = pres("(aa)*", "a");
        assert_eq!(m.size(), 2);
        let g = m.letter_images()[0];
        assert_eq!(m.mul(g, g), 0);
        assert_eq!(m.accepting().to_vec(), vec![0]);
        let dfa = Regex::parse("(aa)*").unwrap().to_dfa(None).unwrap();
        assert_eq!(nerode_classes(&dfa, 4, 4), 2);
    }

    #[test]
    fn all_words_gives_the_trivial_monoid() {
        let m = pres("(a|b)*", "ab");
        assert_eq!(m.size(), 1);
        assert_eq!(m.accepting().len(), 1);
    }

    #[test]
    fn singleton_ab_monoid() {
        let m = pres("ab", "ab");
        assert_eq!(m.size(), 5);
        let labels: Vec<String> = (0..5).map(|x| m.element_label(x)).collect();
        assert_eq!(labels, ["1", "a", "b", "aa", "ab"]);
        let (a, b) = (1, 2);
        let zero = m.mul(a, a);
        assert_eq!(m.mul(b, b), zero);
        assert_eq!(m.mul(b, a), zero);
        assert_eq!(m.semigroup_part().len(), 4);
        let dfa = Regex::parse("ab").unwrap().to_dfa(None).unwrap();
        assert_eq!(nerode_classes(&dfa, 4, 4), 5);
    }

    #[test]
    fn omega_powers() {
        let m = pres("ab", "ab");
        let zero = m.mul(1, 1);
        assert_eq!(m.omega_power(1), zero);
        assert_eq!(m.omega_power(zero), zero);
        let g = pres("(aa)*", "a");
        assert_eq!(g.omega_power(1), 0);
    }

    #[test]
    fn idempotents_and_ideal_of_ab() {
        let m = pres("ab", "ab");
        let s = m.semigroup_part().clone();
        let zero = m.mul(1, 1);
        assert_eq!(m.idempotents(Some(&s)).to_vec(), vec![zero]);
        assert_eq!(m.idempotents_ideal(Some(&s)).unwrap().to_vec(), vec![zero]);
        assert_eq!(m.idempotents(None).len(), 2);
    }

    #[test]
    fn ideal_of_group_is_everything() {
        let g = pres("(aa)*", "a");
        assert_eq!(g.idempotents_ideal(None).unwrap().len(), 2);
        assert_eq!(g.idempotents(None).to_vec(), vec![0]);
    }

    #[test]
    fn band_ideal_is_everything() {
        // Left-zero band on three elements.
        let mult = vec![0, 0, 0, 1, 1, 1, 2, 2, 2];
        let s = SyntacticPresentation::from_table(3, mult, None).unwrap();
        assert_eq!(s.idempotents_ideal(None).unwrap().len(), 3);
    }

    #[test]
    fn local_monoids_of_u1() {
        let u1 = SyntacticPresentation::from_table(2, vec![0, 1, 1, 1], Some(0)).unwrap();
        assert_eq!(u1.local_monoid(0, None).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(u1.local_monoid(1, None).unwrap().to_vec(), vec![1]);
        let g = pres("(aa)*", "a");
        assert!(matches!(
            g.local_monoid(1, None),
            Err(Error::NotIdempotent(1))
        ));
    }

    #[test]
    fn rejects_non_associative_tables() {
        // x*y = y except 1*1 = 0.
        let mult = vec![0, 1, 0, 0];
        assert!(matches!(
            SyntacticPresentation::from_table(2, mult, None),
            Err(Error::NotAssociative(..))
        ));
    }

    #[test]
    fn ideal_requires_closed_subset() {
        let m = pres("ab", "ab");
        let bad = ElementSet::from_elements(m.size(), [1]);
        assert!(matches!(
            m.idempotents_ideal(Some(&bad)),
            Err(Error::NotClosed)
        ));
    }

    #[test]
    fn monoid_guard() {
        let dfa = Regex::parse("(ab|ba)*aab").unwrap().to_dfa(None).unwrap();
        let limits = Limits {
            max_monoid: 3,
            ..Limits::default()
        };
        assert!(matches!(
            SyntacticPresentation::syntactic_morphism(&dfa, &limits),
            Err(Error::Guard { .. })
        ));
    }
}
