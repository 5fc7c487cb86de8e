//! Power-set dynamics of the letter images: `T_k = eta(A^k)`, the stability
//! index, the stable semigroup and monoid, and the images of words grouped
//! by length residue.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::semigroup::{ElementSet, SyntacticPresentation};

/// The sequence `T_k` together with its stability index `s`.
///
/// `s` is the least positive integer with `T_s = T_{2s}`. The sequence is
/// eventually periodic: `T_{k+p} = T_k` for `k >= threshold`, and `s` is
/// the least multiple of the period that is at least the threshold.
#[derive(Clone, Debug)]
pub struct StabilityRecord {
    index: usize,
    threshold: usize,
    period: usize,
    // trace[k - 1] = T_k for k = 1 .. threshold + period - 1
    trace: Vec<ElementSet>,
    stable_semigroup: ElementSet,
    stable_monoid: ElementSet,
}

impl StabilityRecord {
    pub fn compute(m: &SyntacticPresentation) -> Result<StabilityRecord> {
        let letters = m.letter_images();
        if letters.is_empty() {
            return Err(Error::invalid("stability needs at least one letter"));
        }
        let generators = ElementSet::from_elements(m.size(), letters.iter().copied());
        let mut seen: HashMap<ElementSet, usize> = HashMap::new();
        let mut trace = Vec::new();
        let mut current = generators.clone();
        let mut k = 1;
        let (threshold, period) = loop {
            if let Some(&j) = seen.get(&current) {
                break (j, k - j);
            }
            seen.insert(current.clone(), k);
            trace.push(current.clone());
            current = m.set_product(&current, &generators);
            k += 1;
        };
        let index = threshold.div_ceil(period) * period;
        let mut record = StabilityRecord {
            index,
            threshold,
            period,
            trace,
            stable_semigroup: ElementSet::empty(m.size()),
            stable_monoid: ElementSet::empty(m.size()),
        };
        record.stable_semigroup = record.power(index).clone();
        record.stable_monoid = record.stable_semigroup.clone();
        if let Some(e) = m.identity() {
            record.stable_monoid.insert(e);
        }
        Ok(record)
    }

    /// The stability index `s`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// `T_k = eta(A^k)` for any `k >= 1`.
    pub fn power(&self, k: usize) -> &ElementSet {
        assert!(k >= 1, "T_k is defined for k >= 1");
        let k = if k >= self.threshold {
            self.threshold + (k - self.threshold) % self.period
        } else {
            k
        };
        &self.trace[k - 1]
    }

    /// `T_s`, closed under multiplication.
    pub fn stable_semigroup(&self) -> &ElementSet {
        &self.stable_semigroup
    }

    /// `eta((A^s)^*) = T_s` plus the identity.
    pub fn stable_monoid(&self) -> &ElementSet {
        &self.stable_monoid
    }

    pub fn stable_parts(&self) -> (&ElementSet, &ElementSet) {
        (&self.stable_semigroup, &self.stable_monoid)
    }
}

/// Shorthand for [`StabilityRecord::compute`].
pub fn stability_index(m: &SyntacticPresentation) -> Result<StabilityRecord> {
    StabilityRecord::compute(m)
}

/// `R_r = { eta(u) : |u| = r mod d }` for `r = 0 .. d-1`, by reachability in
/// `M x Z_d` from `(1, 0)`.
pub fn length_residue_images(m: &SyntacticPresentation, modulus: u32) -> Result<Vec<ElementSet>> {
    if modulus == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let d = modulus as usize;
    let n = m.size();
    let mut seen = vec![false; n * d];
    let mut queue: Vec<(u32, usize)> = Vec::new();
    match m.identity() {
        Some(e) => {
            seen[e as usize * d] = true;
            queue.push((e, 0));
        }
        None => {
            for &g in m.letter_images() {
                let key = g as usize * d + 1 % d;
                if !seen[key] {
                    seen[key] = true;
                    queue.push((g, 1 % d));
                }
            }
        }
    }
    let mut i = 0;
    while i < queue.len() {
        let (x, r) = queue[i];
        for &g in m.letter_images() {
            let y = m.mul(x, g);
            let r2 = (r + 1) % d;
            let key = y as usize * d + r2;
            if !seen[key] {
                seen[key] = true;
                queue.push((y, r2));
            }
        }
        i += 1;
    }
    let mut out = vec![ElementSet::empty(n); d];
    for (x, r) in queue {
        out[r].insert(x);
    }
    Ok(out)
}
