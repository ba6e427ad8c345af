//! Finitely generated marked groups with peripheral structure: words,
//! representations into Möbius transformations, ball enumeration, relative
//! word length, and the alternating decomposition along peripheral
//! subwords.
//!
//! Words are always freely reduced. Group elements are identified with
//! reduced words, which is exact for the group classes this crate ships
//! (free groups and free products with cyclic or rank-2 abelian peripheral
//! factors); declared relators are used to validate representations, not to
//! deduplicate enumeration.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::moebius::{matrix_distance, Moebius};

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("word is not freely reduced at position {0}")]
    NotReduced(usize),
    #[error("letter {0} is outside the generator range")]
    BadWord(i32),
    #[error("generator names are not distinct")]
    DuplicateGenerator,
    #[error("peripheral `{0}` has no generators")]
    EmptyPeripheral(String),
    #[error("peripheral `{0}` is not declared")]
    UnknownPeripheral(String),
    #[error("image count {got} does not match generator count {want}")]
    ImageCountMismatch { got: usize, want: usize },
    #[error("relator `{0}` does not evaluate to the identity (distance {1:.3e})")]
    RelatorViolated(String, f64),
    #[error("peripheral generator `{0}` maps to the identity")]
    PeripheralCollapsed(String),
    #[error("relative length search budget exceeded ({0} positions)")]
    RelativeLengthBudget(usize),
}

/// A freely reduced word. Letters are signed 1-based generator indices:
/// `+k` is generator `k-1`, `-k` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }

    /// Single generator letter; `inverse` selects the formal inverse.
    pub fn letter(gen_index: usize, inverse: bool) -> Self {
        let l = (gen_index + 1) as i32;
        Self {
            letters: vec![if inverse { -l } else { l }],
        }
    }

    /// Validating constructor: rejects zero letters and adjacent inverse
    /// pairs rather than silently reducing.
    pub fn from_letters(letters: Vec<i32>) -> Result<Self, GroupError> {
        for (i, &l) in letters.iter().enumerate() {
            if l == 0 {
                return Err(GroupError::BadWord(0));
            }
            if i > 0 && letters[i - 1] == -l {
                return Err(GroupError::NotReduced(i));
            }
        }
        Ok(Self { letters })
    }

    /// Reducing constructor: cancels adjacent inverse pairs.
    pub fn reduced_from(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            debug_assert!(l != 0);
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduced_from(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k >= 0 { self.clone() } else { self.inverse() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word {
            letters: self.letters[start..end].to_vec(),
        }
    }

    /// Rank of a letter in the fixed alphabet order `g0 < g0' < g1 < ...`.
    fn letter_rank(l: i32) -> u32 {
        (2 * (l.unsigned_abs() - 1) + u32::from(l < 0)) as u32
    }

    /// Shortlex order: by length, then letterwise by alphabet rank.
    pub fn cmp_shortlex(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            for (&x, &y) in self.letters.iter().zip(other.letters.iter()) {
                match Word::letter_rank(x).cmp(&Word::letter_rank(y)) {
                    std::cmp::Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            std::cmp::Ordering::Equal
        })
    }

    /// Renders the word over generator names, `'` marking inverses.
    pub fn display(&self, names: &[String]) -> String {
        if self.is_empty() {
            return String::new();
        }
        let mut parts = Vec::with_capacity(self.len());
        for &l in &self.letters {
            let idx = (l.unsigned_abs() - 1) as usize;
            let name = names.get(idx).map(String::as_str).unwrap_or("?");
            if l < 0 {
                parts.push(format!("{name}'"));
            } else {
                parts.push(name.to_string());
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l < 0 {
                write!(f, "g{}'", -l - 1)?;
            } else {
                write!(f, "g{}", l - 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeripheralSpec {
    pub name: String,
    pub generators: Vec<Word>,
    /// Expected cusp rank (1 or 2); drives normal-form enumeration for
    /// rank-2 abelian peripherals.
    pub rank_hint: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub generator_names: Vec<String>,
    pub relators: Vec<Word>,
    pub peripherals: Vec<PeripheralSpec>,
}

impl GroupSpec {
    pub fn new(
        generator_names: Vec<String>,
        relators: Vec<Word>,
        peripherals: Vec<PeripheralSpec>,
    ) -> Result<Self, GroupError> {
        let mut seen = std::collections::BTreeSet::new();
        for n in &generator_names {
            if !seen.insert(n.clone()) {
                return Err(GroupError::DuplicateGenerator);
            }
        }
        for p in &peripherals {
            if p.generators.is_empty() || p.generators.iter().any(Word::is_empty) {
                return Err(GroupError::EmptyPeripheral(p.name.clone()));
            }
        }
        Ok(Self {
            generator_names,
            relators,
            peripherals,
        })
    }

    /// Free group convenience: named generators, no relators, no peripherals.
    pub fn free(names: &[&str]) -> Self {
        Self {
            generator_names: names.iter().map(|s| s.to_string()).collect(),
            relators: Vec::new(),
            peripherals: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|n| n == name)
    }

    pub fn peripheral(&self, name: &str) -> Result<&PeripheralSpec, GroupError> {
        self.peripherals
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| GroupError::UnknownPeripheral(name.to_string()))
    }

    fn check_letter(&self, l: i32) -> Result<(), GroupError> {
        let idx = (l.unsigned_abs() as usize).wrapping_sub(1);
        if l == 0 || idx >= self.rank() {
            return Err(GroupError::BadWord(l));
        }
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<(), GroupError> {
        w.letters().iter().try_for_each(|&l| self.check_letter(l))
    }

    /// All freely reduced words of length at most `radius`, in shortlex
    /// order. Deduplication is as free words only; declared relators are
    /// not applied.
    pub fn enumerate_ball(&self, radius: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..radius {
            let mut next = Vec::with_capacity(layer.len() * 2 * self.rank());
            for w in &layer {
                for l in self.alphabet() {
                    if w.letters().last() == Some(&-l) {
                        continue;
                    }
                    let mut ls = w.letters().to_vec();
                    ls.push(l);
                    next.push(Word { letters: ls });
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Alphabet letters in the canonical order `g0, g0', g1, g1', ...`.
    pub fn alphabet(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.rank()).flat_map(|i| [(i + 1) as i32, -((i + 1) as i32)])
    }
}

/// Folded subgroup graph for syntactic membership in the subgroup of the
/// ambient free group generated by a list of words. Exact for free groups.
#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    // adj[state][letter] = successor; letters keyed by signed value.
    adj: Vec<BTreeMap<i32, usize>>,
    base: usize,
}

struct Folder {
    parent: Vec<usize>,
    adj: Vec<BTreeMap<i32, usize>>,
    merges: std::collections::VecDeque<(usize, usize)>,
}

impl Folder {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn fresh(&mut self) -> usize {
        self.parent.push(self.adj.len());
        self.adj.push(BTreeMap::new());
        self.adj.len() - 1
    }

    /// Inserts the labeled edge `s --l--> t` (and its reverse); label
    /// conflicts schedule a state merge instead of overwriting.
    fn insert_edge(&mut self, s: usize, l: i32, t: usize) {
        let s = self.find(s);
        let t = self.find(t);
        match self.adj[s].get(&l).copied() {
            Some(u) => {
                let u = self.find(u);
                if u != t {
                    self.merges.push_back((u, t));
                }
            }
            None => {
                self.adj[s].insert(l, t);
            }
        }
        match self.adj[t].get(&-l).copied() {
            Some(u) => {
                let u = self.find(u);
                if u != s {
                    self.merges.push_back((u, s));
                }
            }
            None => {
                self.adj[t].insert(-l, s);
            }
        }
    }

    fn run_merges(&mut self) {
        while let Some((a, b)) = self.merges.pop_front() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            self.parent[b] = a;
            let edges = std::mem::take(&mut self.adj[b]);
            for (l, t) in edges {
                let t = self.find(t);
                self.insert_edge(a, l, t);
            }
        }
    }
}

impl SubgroupGraph {
    pub fn new(generators: &[Word]) -> Self {
        let mut folder = Folder {
            parent: vec![0],
            adj: vec![BTreeMap::new()],
            merges: std::collections::VecDeque::new(),
        };
        for g in generators {
            // A fresh trail for each generator word, looping at the base.
            let mut state = 0usize;
            let n = g.len();
            for (i, &l) in g.letters().iter().enumerate() {
                let target = if i + 1 == n { 0 } else { folder.fresh() };
                folder.insert_edge(state, l, target);
                folder.run_merges();
                state = folder.find(target);
            }
        }
        folder.run_merges();
        // Renumber representatives into a compact graph.
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let states: Vec<usize> = (0..folder.parent.len()).collect();
        for s in states {
            let r = folder.find(s);
            let next = index.len();
            index.entry(r).or_insert(next);
        }
        let mut adj = vec![BTreeMap::new(); index.len()];
        for (&rep, &i) in &index {
            for (&l, &t) in folder.adj[rep].clone().iter() {
                let rt = folder.find(t);
                adj[i].insert(l, index[&rt]);
            }
        }
        let base = index[&folder.find(0)];
        Self { adj, base }
    }

    /// Membership of a reduced word in the subgroup.
    pub fn contains(&self, w: &Word) -> bool {
        let mut state = self.base;
        for &l in w.letters() {
            match self.adj[state].get(&l) {
                Some(&t) => state = t,
                None => return false,
            }
        }
        state == self.base
    }

    /// Indices `j > start` such that `w[start..j]` lies in the subgroup,
    /// in increasing order (the last entry is the maximal peripheral run).
    pub fn runs_from(&self, w: &Word, start: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut state = self.base;
        for (offset, &l) in w.letters()[start..].iter().enumerate() {
            match self.adj[state].get(&l) {
                Some(&t) => {
                    state = t;
                    if state == self.base {
                        out.push(start + offset + 1);
                    }
                }
                None => break,
            }
        }
        out
    }
}

/// One segment of the alternating decomposition of a word: maximal
/// peripheral subwords separated by non-peripheral letters.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    Plain(Word),
    Peripheral { name: String, word: Word },
}

/// Cached per-group machinery for peripheral-aware operations.
#[derive(Debug, Clone)]
pub struct PeripheralOracle {
    graphs: Vec<(String, SubgroupGraph)>,
}

impl PeripheralOracle {
    pub fn new(spec: &GroupSpec) -> Self {
        Self {
            graphs: spec
                .peripherals
                .iter()
                .map(|p| (p.name.clone(), SubgroupGraph::new(&p.generators)))
                .collect(),
        }
    }

    /// The peripheral (if any) containing the whole word. Declaration order
    /// breaks ties.
    pub fn peripheral_containing(&self, w: &Word) -> Option<&str> {
        if w.is_empty() {
            return None;
        }
        self.graphs
            .iter()
            .find(|(_, g)| g.contains(w))
            .map(|(n, _)| n.as_str())
    }

    /// Longest peripheral run starting at `start`, with its peripheral name.
    fn max_run(&self, w: &Word, start: usize) -> Option<(usize, &str)> {
        let mut best: Option<(usize, &str)> = None;
        for (name, g) in &self.graphs {
            if let Some(&end) = g.runs_from(w, start).last() {
                if best.map(|(e, _)| end > e).unwrap_or(true) {
                    best = Some((end, name.as_str()));
                }
            }
        }
        best
    }
}

/// Decomposition of `w` into maximal nonempty peripheral subwords and the
/// plain words between them. Concatenating the segments restores `w`.
pub fn alternating_form(spec: &GroupSpec, w: &Word) -> Vec<Segment> {
    let oracle = PeripheralOracle::new(spec);
    alternating_form_with(&oracle, w)
}

pub fn alternating_form_with(oracle: &PeripheralOracle, w: &Word) -> Vec<Segment> {
    let mut segments = Vec::new();
    let mut plain_start = 0usize;
    let mut i = 0usize;
    while i < w.len() {
        if let Some((end, name)) = oracle.max_run(w, i) {
            if i > plain_start {
                segments.push(Segment::Plain(w.subword(plain_start, i)));
            }
            segments.push(Segment::Peripheral {
                name: name.to_string(),
                word: w.subword(i, end),
            });
            i = end;
            plain_start = end;
        } else {
            i += 1;
        }
    }
    if plain_start < w.len() {
        segments.push(Segment::Plain(w.subword(plain_start, w.len())));
    }
    segments
}

const RELATIVE_LENGTH_MAX_POSITIONS: usize = 20_000;

/// Length of a shortest expression of `w` over the generators together with
/// whole peripheral-subgroup elements: breadth-first search over positions
/// of `w`, where one step consumes a single letter or a peripheral subword.
/// Exact for free products and free groups with the declared peripheral
/// structure, where shortest relative factorizations align with subwords.
pub fn relative_length(spec: &GroupSpec, w: &Word) -> Result<usize, GroupError> {
    spec.check_word(w)?;
    if w.len() > RELATIVE_LENGTH_MAX_POSITIONS {
        return Err(GroupError::RelativeLengthBudget(w.len()));
    }
    let oracle = PeripheralOracle::new(spec);
    let n = w.len();
    let mut dist = vec![usize::MAX; n + 1];
    dist[0] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        if i == n {
            return Ok(dist[n]);
        }
        let d = dist[i] + 1;
        let mut push = |j: usize, dist: &mut Vec<usize>, queue: &mut std::collections::VecDeque<usize>| {
            if dist[j] == usize::MAX {
                dist[j] = d;
                queue.push_back(j);
            }
        };
        push(i + 1, &mut dist, &mut queue);
        for (_, g) in &oracle.graphs {
            for j in g.runs_from(w, i) {
                push(j, &mut dist, &mut queue);
            }
        }
    }
    Ok(dist[n])
}

/// Elements of a peripheral subgroup as reduced words of letter length at
/// most `max_letters`, in a deterministic shell order. Exact normal forms
/// for single-letter cyclic and rank-2 abelian peripherals; other shapes
/// fall back to power or syllable enumeration (deduplicated as free words).
pub fn peripheral_elements(
    spec: &GroupSpec,
    peripheral: &PeripheralSpec,
    max_letters: usize,
) -> Result<Vec<Word>, GroupError> {
    for g in &peripheral.generators {
        spec.check_word(g)?;
    }
    let single_letters: Option<Vec<i32>> = peripheral
        .generators
        .iter()
        .map(|g| (g.len() == 1).then(|| g.letters()[0]))
        .collect();
    let mut out = Vec::new();
    match single_letters {
        Some(ls) if ls.len() == 2 && peripheral.rank_hint == 2 => {
            // Lattice normal form u^m v^n by shells in |m| + |n|.
            let (u, v) = (ls[0], ls[1]);
            for shell in 1..=max_letters as i64 {
                for m in -shell..=shell {
                    let rem = shell - m.abs();
                    let n_choices: &[i64] = if rem == 0 { &[0] } else { &[rem, -rem] };
                    for &n in n_choices {
                        let mut letters = Vec::new();
                        letters.extend(std::iter::repeat(if m >= 0 { u } else { -u }).take(m.unsigned_abs() as usize));
                        letters.extend(std::iter::repeat(if n >= 0 { v } else { -v }).take(n.unsigned_abs() as usize));
                        out.push(Word::reduced_from(letters));
                    }
                }
            }
        }
        Some(ls) => {
            // Free reduced words over the peripheral letters.
            let mut layer = vec![Word::empty()];
            for _ in 0..max_letters {
                let mut next = Vec::new();
                for w in &layer {
                    for &base in &ls {
                        for l in [base, -base] {
                            if w.letters().last() == Some(&-l) {
                                continue;
                            }
                            let mut v = w.letters().to_vec();
                            v.push(l);
                            next.push(Word { letters: v });
                        }
                    }
                }
                out.extend(next.iter().cloned());
                layer = next;
            }
            out.sort_by(Word::cmp_shortlex);
            out.dedup();
        }
        None if peripheral.generators.len() == 1 => {
            // Powers of a single generator word.
            let u = &peripheral.generators[0];
            let max_k = (max_letters / u.len()).max(1) as i64;
            for k in 1..=max_k {
                out.push(u.pow(k));
                out.push(u.pow(-k));
            }
        }
        None => {
            // Bounded syllable products over the generator words.
            let mut layer = vec![Word::empty()];
            let maxlen = max_letters;
            for _ in 0..max_letters {
                let mut next = Vec::new();
                for w in &layer {
                    for g in &peripheral.generators {
                        for cand in [w.concat(g), w.concat(&g.inverse())] {
                            if !cand.is_empty() && cand.len() <= maxlen {
                                next.push(cand);
                            }
                        }
                    }
                }
                out.extend(next.iter().cloned());
                layer = next;
                if layer.is_empty() {
                    break;
                }
            }
            out.sort_by(Word::cmp_shortlex);
            out.dedup();
        }
    }
    Ok(out)
}

/// Tolerance on relator images of a valid representation.
pub const RELATOR_TOL: f64 = 1e-8;

/// A homomorphism of the marked group into Möbius transformations, given by
/// generator images. Relators must evaluate to the identity (mod sign) and
/// peripheral generators must not collapse.
#[derive(Debug, Clone)]
pub struct Representation {
    spec: GroupSpec,
    images: Vec<Moebius>,
    inverses: Vec<Moebius>,
}

impl Representation {
    pub fn new(spec: GroupSpec, images: Vec<Moebius>) -> Result<Self, GroupError> {
        if images.len() != spec.rank() {
            return Err(GroupError::ImageCountMismatch {
                got: images.len(),
                want: spec.rank(),
            });
        }
        let inverses = images.iter().map(Moebius::inverse).collect();
        let rep = Self {
            spec,
            images,
            inverses,
        };
        for r in &rep.spec.relators {
            let m = rep.evaluate(r)?;
            let d = matrix_distance(&m, &Moebius::identity());
            if d > RELATOR_TOL {
                return Err(GroupError::RelatorViolated(r.to_string(), d));
            }
        }
        for p in &rep.spec.peripherals {
            for g in &p.generators {
                let m = rep.evaluate(g)?;
                if m.is_identity(RELATOR_TOL) {
                    return Err(GroupError::PeripheralCollapsed(p.name.clone()));
                }
            }
        }
        Ok(rep)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn generator_image(&self, index: usize) -> &Moebius {
        &self.images[index]
    }

    pub fn images(&self) -> &[Moebius] {
        &self.images
    }

    fn letter_image(&self, l: i32) -> &Moebius {
        let idx = (l.unsigned_abs() - 1) as usize;
        if l > 0 {
            &self.images[idx]
        } else {
            &self.inverses[idx]
        }
    }

    /// Product of generator images along the word, renormalized throughout.
    pub fn evaluate(&self, w: &Word) -> Result<Moebius, GroupError> {
        self.spec.check_word(w)?;
        let mut m = Moebius::identity();
        for &l in w.letters() {
            m = m.compose(self.letter_image(l));
        }
        Ok(m)
    }

    /// All reduced words up to `max_len` (or exactly `max_len` when
    /// `exact_only`) with their images, in shortlex order. Prefix products
    /// are shared; top-level branches evaluate in parallel.
    pub fn enumerate_with_images(
        &self,
        max_len: usize,
        exact_only: bool,
    ) -> Vec<(Word, Moebius)> {
        if max_len == 0 {
            return if exact_only {
                vec![(Word::empty(), Moebius::identity())]
            } else {
                vec![(Word::empty(), Moebius::identity())]
            };
        }
        let alphabet: Vec<i32> = self.spec.alphabet().collect();
        let mut out: Vec<(Word, Moebius)> = alphabet
            .par_iter()
            .map(|&first| {
                let mut acc = Vec::new();
                let mut stack = vec![(vec![first], self.letter_image(first).clone())];
                while let Some((letters, m)) = stack.pop() {
                    if !exact_only || letters.len() == max_len {
                        acc.push((Word { letters: letters.clone() }, m.clone()));
                    }
                    if letters.len() < max_len {
                        // Reverse order keeps the DFS stack in shortlex order.
                        for &l in alphabet.iter().rev() {
                            if l == -letters[letters.len() - 1] {
                                continue;
                            }
                            let mut next = letters.clone();
                            next.push(l);
                            stack.push((next, m.compose(self.letter_image(l))));
                        }
                    }
                }
                acc
            })
            .flatten()
            .collect();
        if !exact_only {
            out.push((Word::empty(), Moebius::identity()));
        }
        out.sort_by(|x, y| x.0.cmp_shortlex(&y.0));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as Complex;

    fn free2() -> GroupSpec {
        GroupSpec::free(&["a", "b"])
    }

    fn with_peripheral_a() -> GroupSpec {
        GroupSpec::new(
            vec!["a".into(), "b".into()],
            vec![],
            vec![PeripheralSpec {
                name: "cusp".into(),
                generators: vec![Word::letter(0, false)],
                rank_hint: 1,
            }],
        )
        .unwrap()
    }

    #[test]
    fn word_construction_rejects_unreduced() {
        assert!(Word::from_letters(vec![1, -1]).is_err());
        assert!(Word::from_letters(vec![1, 2, -2]).is_err());
        let w = Word::reduced_from(vec![1, 2, -2, 1]);
        assert_eq!(w.letters(), &[1, 1]);
    }

    #[test]
    fn ball_counts_match_free_group() {
        let g = free2();
        assert_eq!(g.enumerate_ball(0).len(), 1);
        assert_eq!(g.enumerate_ball(1).len(), 5);
        assert_eq!(g.enumerate_ball(3).len(), 53);
    }

    #[test]
    fn shortlex_order_is_canonical() {
        let g = free2();
        let ball = g.enumerate_ball(2);
        for pair in ball.windows(2) {
            assert_eq!(
                pair[0].cmp_shortlex(&pair[1]),
                std::cmp::Ordering::Less,
                "ball not in shortlex order"
            );
        }
    }

    #[test]
    fn relative_length_examples() {
        let g = with_peripheral_a();
        let a100 = Word::letter(0, false).pow(100);
        assert_eq!(relative_length(&g, &a100).unwrap(), 1);
        let a100b = a100.concat(&Word::letter(1, false));
        assert_eq!(relative_length(&g, &a100b).unwrap(), 2);
        assert_eq!(relative_length(&g, &Word::letter(1, false)).unwrap(), 1);
        // No peripheral structure: relative length is word length.
        let free = free2();
        assert_eq!(relative_length(&free, &a100b).unwrap(), 101);
    }

    #[test]
    fn alternating_form_examples() {
        let g = with_peripheral_a();
        let a = Word::letter(0, false);
        let b = Word::letter(1, false);

        let segs = alternating_form(&g, &a.pow(100));
        assert_eq!(segs.len(), 1);
        assert!(matches!(&segs[0], Segment::Peripheral { word, .. } if word.len() == 100));

        let w = b.concat(&a.pow(3)).concat(&b);
        let segs = alternating_form(&g, &w);
        assert_eq!(segs.len(), 3);
        assert!(matches!(&segs[0], Segment::Plain(p) if p == &b));
        assert!(matches!(&segs[1], Segment::Peripheral { word, .. } if word.len() == 3));
        assert!(matches!(&segs[2], Segment::Plain(p) if p == &b));

        let segs = alternating_form(&g, &b.pow(2));
        assert_eq!(segs.len(), 1);
        assert!(matches!(&segs[0], Segment::Plain(p) if p.len() == 2));
    }

    #[test]
    fn alternating_form_round_trips() {
        let g = with_peripheral_a();
        let ball = g.enumerate_ball(6);
        for w in &ball {
            let segs = alternating_form(&g, w);
            let mut rebuilt = Word::empty();
            for s in &segs {
                match s {
                    Segment::Plain(p) => rebuilt = rebuilt.concat(p),
                    Segment::Peripheral { word, .. } => rebuilt = rebuilt.concat(word),
                }
            }
            assert_eq!(&rebuilt, w);
        }
    }

    #[test]
    fn subgroup_membership_handles_nontrivial_generators() {
        // Subgroup generated by a^2 inside <a, b>.
        let graph = SubgroupGraph::new(&[Word::reduced_from(vec![1, 1])]);
        assert!(graph.contains(&Word::reduced_from(vec![1, 1])));
        assert!(graph.contains(&Word::reduced_from(vec![-1, -1, -1, -1])));
        assert!(!graph.contains(&Word::letter(0, false)));
        assert!(!graph.contains(&Word::letter(1, false)));
        // Conjugate generator b a b'.
        let graph = SubgroupGraph::new(&[Word::reduced_from(vec![2, 1, -2])]);
        assert!(graph.contains(&Word::reduced_from(vec![2, 1, 1, -2])));
        assert!(!graph.contains(&Word::letter(0, false)));
    }

    #[test]
    fn representation_validates_relators_and_peripherals() {
        // Z^2 as <u, v | [u, v]> with commuting parabolic images.
        let spec = GroupSpec::new(
            vec!["u".into(), "v".into()],
            vec![Word::from_letters(vec![1, 2, -1, -2]).unwrap()],
            vec![PeripheralSpec {
                name: "cusp".into(),
                generators: vec![Word::letter(0, false), Word::letter(1, false)],
                rank_hint: 2,
            }],
        )
        .unwrap();
        let u = Moebius::translation(Complex::new(1.0, 0.0));
        let v = Moebius::translation(Complex::new(0.0, 1.0));
        assert!(Representation::new(spec.clone(), vec![u, v]).is_ok());

        // Non-commuting images violate the relator.
        let w = Moebius::scaling(4.0);
        assert!(matches!(
            Representation::new(spec.clone(), vec![u, w]),
            Err(GroupError::RelatorViolated(..))
        ));

        // Collapsed peripheral generator.
        let id = Moebius::identity();
        assert!(matches!(
            Representation::new(spec, vec![id, id]),
            Err(GroupError::RelatorViolated(..) | GroupError::PeripheralCollapsed(..))
        ));
    }

    #[test]
    fn evaluate_is_composition() {
        let spec = free2();
        let a = Moebius::scaling(4.0);
        let b = Moebius::translation(Complex::new(1.0, 0.0));
        let rep = Representation::new(spec, vec![a, b]).unwrap();
        assert!(rep
            .evaluate(&Word::empty())
            .unwrap()
            .entrywise_distance(&Moebius::identity())
            < 1e-15);
        let ab = Word::from_letters(vec![1, 2]).unwrap();
        let direct = rep.evaluate(&ab).unwrap();
        assert!(direct.entrywise_distance(&a.compose(&b)) < 1e-14);
        assert!(matches!(
            rep.evaluate(&Word::from_letters(vec![3]).unwrap()),
            Err(GroupError::BadWord(3))
        ));
    }

    #[test]
    fn enumerate_with_images_matches_ball() {
        let spec = free2();
        let rep = Representation::new(
            spec.clone(),
            vec![Moebius::scaling(4.0), Moebius::translation(Complex::new(1.0, 0.0))],
        )
        .unwrap();
        let listed = rep.enumerate_with_images(3, false);
        let ball = spec.enumerate_ball(3);
        assert_eq!(listed.len(), ball.len());
        for ((w, m), expect) in listed.iter().zip(ball.iter()) {
            assert_eq!(w, expect);
            let direct = rep.evaluate(w).unwrap();
            assert!(m.entrywise_distance(&direct) < 1e-12);
        }
        let exact = rep.enumerate_with_images(3, true);
        assert_eq!(exact.len(), 36);
    }

    #[test]
    fn peripheral_element_enumeration() {
        let g = with_peripheral_a();
        let p = g.peripheral("cusp").unwrap();
        let elems = peripheral_elements(&g, p, 3).unwrap();
        // a, a', a^2, a'^2, a^3, a'^3
        assert_eq!(elems.len(), 6);

        let z2 = GroupSpec::new(
            vec!["u".into(), "v".into()],
            vec![],
            vec![PeripheralSpec {
                name: "cusp".into(),
                generators: vec![Word::letter(0, false), Word::letter(1, false)],
                rank_hint: 2,
            }],
        )
        .unwrap();
        let p2 = z2.peripheral("cusp").unwrap();
        let elems = peripheral_elements(&z2, p2, 2).unwrap();
        // Shell 1: 4 lattice points; shell 2: 8.
        assert_eq!(elems.len(), 12);
    }
}
