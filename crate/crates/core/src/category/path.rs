use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::category::finite::FiniteCategory;
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite graph: named vertices and named edges between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl GraphSpec {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> Result<GraphSpec> {
        if vertices.is_empty() {
            return Err(Error::invalid("a graph needs at least one vertex"));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !is_name(v) {
                return Err(Error::invalid(format!("bad vertex name {v:?}")));
            }
            if vertices[..i].contains(v) {
                return Err(Error::invalid(format!("duplicate vertex {v}")));
            }
        }
        let vertex = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::invalid(format!("unknown vertex {name}")))
        };
        let mut out = Vec::with_capacity(edges.len());
        for (name, src, dst) in edges {
            if !is_name(&name) {
                return Err(Error::invalid(format!("bad edge name {name:?}")));
            }
            if out.iter().any(|e: &Edge| e.name == name) || vertices.contains(&name) {
                return Err(Error::invalid(format!("duplicate name {name}")));
            }
            out.push(Edge {
                src: vertex(&src)?,
                dst: vertex(&dst)?,
                name,
            });
        }
        Ok(GraphSpec {
            vertices,
            edges: out,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// Vertex indices sorted by name.
    fn vertex_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]));
        order
    }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_name_char)
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// A path in a graph built from edges by concatenation and ω-powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathTerm {
    Edge { name: String, index: usize },
    Concat(Vec<PathTerm>),
    Omega(Box<PathTerm>),
    Power(Box<PathTerm>, u32),
}

impl PathTerm {
    /// Parses a term whose leaves are edge names of `graph`, separated by
    /// whitespace. Postfix `^w` (or `^ω`) and `^N` apply to loops.
    pub fn parse(text: &str, graph: &GraphSpec) -> Result<PathTerm> {
        let mut p = TermParser {
            chars: text.char_indices().collect(),
            pos: 0,
            graph,
        };
        let term = p.concat()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(Error::syntax(p.offset(), "unexpected character"));
        }
        term.endpoints(graph)?;
        Ok(term)
    }

    /// Source and target vertex, checking consecutiveness and loops.
    pub fn endpoints(&self, graph: &GraphSpec) -> Result<(usize, usize)> {
        match self {
            PathTerm::Edge { index, .. } => {
                let e = graph
                    .edges
                    .get(*index)
                    .ok_or_else(|| Error::invalid("edge index out of range"))?;
                Ok((e.src, e.dst))
            }
            PathTerm::Concat(parts) => {
                let mut ends: Option<(usize, usize)> = None;
                for part in parts {
                    let (s, t) = part.endpoints(graph)?;
                    ends = match ends {
                        None => Some((s, t)),
                        Some((s0, t0)) if t0 == s => Some((s0, t)),
                        Some(_) => {
                            return Err(Error::invalid(format!(
                                "`{part}` does not continue the path"
                            )))
                        }
                    };
                }
                ends.ok_or_else(|| Error::invalid("empty path"))
            }
            PathTerm::Omega(t) | PathTerm::Power(t, _) => {
                let (s, d) = t.endpoints(graph)?;
                if s != d {
                    return Err(Error::invalid(format!(
                        "power of `{t}`, which is not a loop"
                    )));
                }
                Ok((s, d))
            }
        }
    }

    /// Value of the term under an edge assignment.
    pub fn eval(&self, c: &FiniteCategory, edges: &[u32]) -> u32 {
        match self {
            PathTerm::Edge { index, .. } => edges[*index],
            PathTerm::Concat(parts) => {
                let mut it = parts.iter().map(|p| p.eval(c, edges));
                let first = it.next().expect("non-empty concatenation");
                it.fold(first, |acc, v| c.compose(acc, v))
            }
            PathTerm::Omega(t) => c.omega(t.eval(c, edges)),
            PathTerm::Power(t, n) => {
                let v = t.eval(c, edges);
                (1..*n).fold(v, |acc, _| c.compose(acc, v))
            }
        }
    }

    fn same_shape(&self, other: &PathTerm) -> bool {
        match (self, other) {
            (PathTerm::Edge { index: a, .. }, PathTerm::Edge { index: b, .. }) => a == b,
            (PathTerm::Concat(a), PathTerm::Concat(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_shape(y))
            }
            (PathTerm::Omega(a), PathTerm::Omega(b)) => a.same_shape(b),
            (PathTerm::Power(a, n), PathTerm::Power(b, m)) => n == m && a.same_shape(b),
            _ => false,
        }
    }
}

impl fmt::Display for PathTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(t: &PathTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                PathTerm::Edge { name, .. } => write!(f, "{name}"),
                _ => write!(f, "({t})"),
            }
        }
        match self {
            PathTerm::Edge { name, .. } => write!(f, "{name}"),
            PathTerm::Concat(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    match p {
                        PathTerm::Concat(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            PathTerm::Omega(t) => {
                atom(t, f)?;
                write!(f, "^w")
            }
            PathTerm::Power(t, n) => {
                atom(t, f)?;
                write!(f, "^{n}")
            }
        }
    }
}

struct TermParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    graph: &'a GraphSpec,
}

impl TermParser<'_> {
    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or_else(
            || self.chars.last().map_or(0, |&(i, c)| i + c.len_utf8()),
            |&(i, _)| i,
        )
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn concat(&mut self) -> Result<PathTerm> {
        let mut parts = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == '(' || is_name_char(c) => parts.push(self.postfix()?),
                _ => break,
            }
        }
        match parts.len() {
            0 => Err(Error::syntax(self.offset(), "expected an edge or `(`")),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(PathTerm::Concat(parts)),
        }
    }

    fn postfix(&mut self) -> Result<PathTerm> {
        let mut term = self.atom()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            match self.peek() {
                Some('w') | Some('ω') => {
                    self.pos += 1;
                    term = PathTerm::Omega(Box::new(term));
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    let digits: String = self.chars[start..self.pos]
                        .iter()
                        .map(|&(_, c)| c)
                        .collect();
                    let n: u32 = digits.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
                        Error::syntax(self.chars[start].0, "exponent must be a positive integer")
                    })?;
                    term = PathTerm::Power(Box::new(term), n);
                }
                _ => {
                    return Err(Error::syntax(
                        self.offset(),
                        "expected `w` or an exponent after `^`",
                    ))
                }
            }
        }
        Ok(term)
    }

    fn atom(&mut self) -> Result<PathTerm> {
        let start = self.offset();
        if self.peek() == Some('(') {
            self.pos += 1;
            let inner = self.concat()?;
            self.skip_ws();
            if self.peek() != Some(')') {
                return Err(Error::syntax(self.offset(), "expected `)`"));
            }
            self.pos += 1;
            return Ok(inner);
        }
        let begin = self.pos;
        while self.peek().is_some_and(is_name_char) {
            self.pos += 1;
        }
        let name: String = self.chars[begin..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        let index = self
            .graph
            .edge_index(&name)
            .ok_or_else(|| Error::syntax(start, format!("unknown edge {name}")))?;
        Ok(PathTerm::Edge { name, index })
    }
}

/// An equation between two coterminal paths of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathEquation {
    graph: GraphSpec,
    lhs: PathTerm,
    rhs: PathTerm,
}

impl PathEquation {
    pub fn new(graph: GraphSpec, lhs: PathTerm, rhs: PathTerm) -> Result<PathEquation> {
        let l = lhs.endpoints(&graph)?;
        let r = rhs.endpoints(&graph)?;
        if l != r {
            return Err(Error::invalid(format!(
                "`{lhs}` and `{rhs}` are not coterminal"
            )));
        }
        Ok(PathEquation { graph, lhs, rhs })
    }

    /// Parses `lhs = rhs` over `graph`.
    pub fn parse(graph: &GraphSpec, text: &str) -> Result<PathEquation> {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| Error::syntax(0, "expected `lhs = rhs`"))?;
        let lhs = PathTerm::parse(l, graph)?;
        let rhs = PathTerm::parse(r, graph).map_err(|e| shift(e, l.len() + 1))?;
        PathEquation::new(graph.clone(), lhs, rhs)
    }

    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    pub fn lhs(&self) -> &PathTerm {
        &self.lhs
    }

    pub fn rhs(&self) -> &PathTerm {
        &self.rhs
    }

    /// True when this is Knast's equation up to renaming, with the vertices
    /// in the same name order (so the enumeration order coincides).
    pub fn is_knast(&self) -> bool {
        let k = knast_equation();
        if self.graph.vertices.len() != 2 || self.graph.edges.len() != 4 {
            return false;
        }
        let rank = {
            let order = self.graph.vertex_order();
            let mut rank = vec![0; 2];
            for (r, &v) in order.iter().enumerate() {
                rank[v] = r;
            }
            rank
        };
        let shape_ok = self
            .graph
            .edges
            .iter()
            .zip(&k.graph.edges)
            .all(|(a, b)| (rank[a.src], rank[a.dst]) == (b.src, b.dst));
        shape_ok && self.lhs.same_shape(&k.lhs) && self.rhs.same_shape(&k.rhs)
    }
}

impl fmt::Display for PathEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Syntax { position, message } => Error::Syntax {
            position: position + by,
            message,
        },
        other => other,
    }
}

/// Knast's equation on two vertices `p`, `q` with `m1, m3 : p -> q` and
/// `m2, m4 : q -> p`.
pub fn knast_equation() -> PathEquation {
    parse_path_equations(KNAST_TEXT)
        .expect("built-in equation parses")
        .pop()
        .expect("one equation")
}

pub const KNAST_TEXT: &str = "vertices: p q
edge: m1 p q
edge: m2 q p
edge: m3 p q
edge: m4 q p
equation: (m1 m2)^w (m3 m4)^w = (m1 m2)^w m1 m4 (m3 m4)^w
";

/// Reads the equation file format:
///
/// ```text
/// vertices: p q
/// edge: m1 p q
/// equation: (m1 m2)^w (m3 m4)^w = (m1 m2)^w m1 m4 (m3 m4)^w
/// ```
///
/// Blank lines and lines starting with `#` are ignored. All equations share
/// the graph declared above them.
pub fn parse_path_equations(text: &str) -> Result<Vec<PathEquation>> {
    let mut vertices: Option<Vec<String>> = None;
    let mut edges = Vec::new();
    let mut graph: Option<GraphSpec> = None;
    let mut equations = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let here = offset;
        offset += line.len() + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, rest) = trimmed
            .split_once(':')
            .ok_or_else(|| Error::syntax(here, "expected `key: value`"))?;
        match key.trim() {
            "vertices" => {
                if vertices.is_some() {
                    return Err(Error::syntax(here, "vertices declared twice"));
                }
                vertices = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            "edge" => {
                if graph.is_some() {
                    return Err(Error::syntax(here, "edges must precede equations"));
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(Error::syntax(here, "expected `edge: name src dst`"));
                }
                edges.push((
                    parts[0].to_string(),
                    parts[1].to_string(),
                    parts[2].to_string(),
                ));
            }
            "equation" => {
                if graph.is_none() {
                    let v = vertices
                        .clone()
                        .ok_or_else(|| Error::syntax(here, "equation before `vertices:`"))?;
                    graph = Some(GraphSpec::new(v, edges.clone())?);
                }
                let g = graph.as_ref().unwrap();
                let start = here + line.find(':').unwrap() + 1;
                equations.push(PathEquation::parse(g, rest).map_err(|e| shift(e, start))?);
            }
            other => return Err(Error::syntax(here, format!("unknown key `{other}`"))),
        }
    }
    if equations.is_empty() {
        return Err(Error::invalid("no `equation:` line"));
    }
    Ok(equations)
}

/// A graph morphism on which an equation fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    /// Position of the failing equation in its set.
    pub equation: usize,
    /// Object of each vertex, in declaration order.
    pub objects: Vec<(String, usize)>,
    /// Arrow value of each edge, in declaration order.
    pub edges: Vec<(String, u32)>,
    pub lhs: u32,
    pub rhs: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathVerdict {
    Holds,
    Fails(PathWitness),
}

impl PathVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PathVerdict::Holds)
    }

    pub fn witness(&self) -> Option<&PathWitness> {
        match self {
            PathVerdict::Holds => None,
            PathVerdict::Fails(w) => Some(w),
        }
    }
}

/// Number of graph morphisms into `c`, or `None` once it exceeds `cap`.
fn morphism_count(c: &FiniteCategory, g: &GraphSpec, cap: u128) -> Option<u128> {
    let n = c.object_count();
    let order = g.vertex_order();
    let mut objects = vec![0usize; g.vertices.len()];
    let mut total: u128 = 0;
    loop {
        let mut count: u128 = 1;
        for e in &g.edges {
            count = count.saturating_mul(c.hom(objects[e.src], objects[e.dst]).len() as u128);
        }
        // Each object assignment costs at least one step.
        total = total.saturating_add(count.max(1));
        if total > cap {
            return None;
        }
        if !advance_objects(&mut objects, &order, n) {
            return Some(total);
        }
    }
}

/// Odometer over object assignments; the vertex last in name order varies
/// fastest.
fn advance_objects(objects: &mut [usize], order: &[usize], n: usize) -> bool {
    for &v in order.iter().rev() {
        objects[v] += 1;
        if objects[v] < n {
            return true;
        }
        objects[v] = 0;
    }
    false
}

fn guard(c: &FiniteCategory, g: &GraphSpec, limits: &Limits) -> Result<()> {
    match morphism_count(c, g, limits.max_assignments) {
        Some(_) => Ok(()),
        None => {
            // Report the exact size when it is cheap to get.
            let actual = morphism_count(c, g, u128::MAX).unwrap_or(u128::MAX);
            Err(Error::Guard {
                what: "graph morphisms",
                actual,
                cap: limits.max_assignments,
                flag: "--max-assignments",
            })
        }
    }
}

fn witness(
    eq: &PathEquation,
    index: usize,
    objects: &[usize],
    values: &[u32],
    lhs: u32,
    rhs: u32,
) -> PathWitness {
    PathWitness {
        equation: index,
        objects: eq
            .graph
            .vertices
            .iter()
            .cloned()
            .zip(objects.iter().copied())
            .collect(),
        edges: eq
            .graph
            .edges
            .iter()
            .map(|e| e.name.clone())
            .zip(values.iter().copied())
            .collect(),
        lhs,
        rhs,
    }
}

/// Exhaustive check over all graph morphisms. Objects are enumerated in
/// vertex-name order, then edges in declaration order over ascending arrow
/// values; the first failure is returned.
pub fn check_path_equation(
    c: &FiniteCategory,
    eq: &PathEquation,
    limits: &Limits,
) -> Result<PathVerdict> {
    check_one(c, eq, 0, limits)
}

fn check_one(
    c: &FiniteCategory,
    eq: &PathEquation,
    index: usize,
    limits: &Limits,
) -> Result<PathVerdict> {
    let g = &eq.graph;
    guard(c, g, limits)?;
    let n = c.object_count();
    let order = g.vertex_order();
    let mut objects = vec![0usize; g.vertices.len()];
    loop {
        let homs: Vec<&[u32]> = g
            .edges
            .iter()
            .map(|e| c.hom(objects[e.src], objects[e.dst]))
            .collect();
        if homs.iter().all(|h| !h.is_empty()) {
            let mut pick = vec![0usize; homs.len()];
            let mut values: Vec<u32> = homs.iter().map(|h| h[0]).collect();
            'edges: loop {
                let lhs = eq.lhs.eval(c, &values);
                let rhs = eq.rhs.eval(c, &values);
                if lhs != rhs {
                    return Ok(PathVerdict::Fails(witness(
                        eq, index, &objects, &values, lhs, rhs,
                    )));
                }
                for i in (0..pick.len()).rev() {
                    pick[i] += 1;
                    if pick[i] < homs[i].len() {
                        values[i] = homs[i][pick[i]];
                        continue 'edges;
                    }
                    pick[i] = 0;
                    values[i] = homs[i][0];
                }
                break;
            }
        }
        if !advance_objects(&mut objects, &order, n) {
            return Ok(PathVerdict::Holds);
        }
    }
}

/// Checks a list of equations in order; the first failing one yields the
/// witness. Knast's equation takes a faster route with the same witness.
pub fn check_path_equations(
    c: &FiniteCategory,
    eqs: &[PathEquation],
    limits: &Limits,
) -> Result<PathVerdict> {
    for (i, eq) in eqs.iter().enumerate() {
        let verdict = if eq.is_knast() {
            check_knast_fast(c, eq, i)
        } else {
            check_one(c, eq, i, limits)?
        };
        if !verdict.holds() {
            return Ok(verdict);
        }
    }
    Ok(PathVerdict::Holds)
}

/// Knast's equation in `O(|E|^2 |U| |V|)` per object pair instead of
/// `O(|U|^2 |V|^2)`, where `U = C(x, y)` and `V = C(y, x)`.
///
/// With `e = (m1 m2)^w`, `a = e m1`, `f = (m3 m4)^w` and `b = m4 f`, the
/// equation reads `e f = a b`, so only the distinct pairs `(e, a)` and
/// `(f, b)` matter.
pub fn check_knast(c: &FiniteCategory) -> PathVerdict {
    check_knast_fast(c, &knast_equation(), 0)
}

type HomPair<'a> = (&'a [u32], &'a [u32]);

fn check_knast_fast(c: &FiniteCategory, eq: &PathEquation, index: usize) -> PathVerdict {
    let order = eq.graph.vertex_order();
    let (p, q) = (order[0], order[1]);
    let n = c.object_count();
    let mut cache: HashMap<HomPair, Option<[u32; 4]>> = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            let u = c.hom(x, y);
            let v = c.hom(y, x);
            if u.is_empty() || v.is_empty() {
                continue;
            }
            let found = *cache.entry((u, v)).or_insert_with(|| knast_pair(c, u, v));
            if let Some(m) = found {
                let mut objects = vec![0; 2];
                objects[p] = x;
                objects[q] = y;
                let e = c.omega(c.compose(m[0], m[1]));
                let f = c.omega(c.compose(m[2], m[3]));
                let lhs = c.compose(e, f);
                let rhs = c.compose(c.compose(c.compose(e, m[0]), m[3]), f);
                return PathVerdict::Fails(witness(eq, index, &objects, &m, lhs, rhs));
            }
        }
    }
    PathVerdict::Holds
}

/// Least failing `(m1, m2, m3, m4)` in `U x V x U x V`, if any.
fn knast_pair(c: &FiniteCategory, u: &[u32], v: &[u32]) -> Option<[u32; 4]> {
    let mut right: Vec<(u32, u32)> = Vec::new();
    for &m3 in u {
        for &m4 in v {
            let f = c.omega(c.compose(m3, m4));
            right.push((f, c.compose(m4, f)));
        }
    }
    right.sort_unstable();
    right.dedup();
    let mut memo: HashMap<(u32, u32), bool> = HashMap::new();
    for &m1 in u {
        for &m2 in v {
            let e = c.omega(c.compose(m1, m2));
            let a = c.compose(e, m1);
            let fails = *memo.entry((e, a)).or_insert_with(|| {
                right
                    .iter()
                    .any(|&(f, b)| c.compose(e, f) != c.compose(a, b))
            });
            if fails {
                for &m3 in u {
                    for &m4 in v {
                        let f = c.omega(c.compose(m3, m4));
                        if c.compose(e, f) != c.compose(a, c.compose(m4, f)) {
                            return Some([m1, m2, m3, m4]);
                        }
                    }
                }
                unreachable!("memoized failure has a witness");
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::semigroup::SyntacticPresentation;

    fn group(n: u32) -> FiniteCategory {
        let mult = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let m = SyntacticPresentation::from_table(n as usize, mult, Some(0)).unwrap();
        FiniteCategory::one_object(Arc::new(m)).unwrap()
    }

    #[test]
    fn knast_structure() {
        let k = knast_equation();
        assert_eq!(k.graph().vertices(), ["p", "q"]);
        assert_eq!(k.lhs().endpoints(k.graph()).unwrap(), (0, 0));
        assert_eq!(k.rhs().endpoints(k.graph()).unwrap(), (0, 0));
        assert_eq!(
            k.to_string(),
            "(m1 m2)^w (m3 m4)^w = (m1 m2)^w m1 m4 (m3 m4)^w"
        );
        assert!(k.is_knast());
    }

    #[test]
    fn z2_fails_knast() {
        let c = group(2);
        let k = knast_equation();
        let slow = check_path_equation(&c, &k, &Limits::default()).unwrap();
        let w = slow.witness().unwrap();
        assert_eq!(
            w.edges.iter().map(|e| e.1).collect::<Vec<_>>(),
            vec![0, 0, 0, 1]
        );
        assert_eq!((w.lhs, w.rhs), (0, 1));
        assert_eq!(check_knast(&c), slow);
    }

    #[test]
    fn trivial_monoid_satisfies_knast() {
        let c = group(1);
        assert!(
            check_path_equation(&c, &knast_equation(), &Limits::default())
                .unwrap()
                .holds()
        );
    }

    #[test]
    fn parse_errors() {
        let g = GraphSpec::new(
            vec!["p".into(), "q".into()],
            vec![
                ("a".into(), "p".into(), "q".into()),
                ("b".into(), "q".into(), "p".into()),
            ],
        )
        .unwrap();
        assert!(PathTerm::parse("a a", &g).is_err());
        assert!(PathTerm::parse("a^w", &g).is_err());
        assert!(PathTerm::parse("(a b)^w a", &g).is_ok());
        assert!(PathTerm::parse("c", &g).is_err());
        assert!(PathEquation::parse(&g, "a b = b a").is_err());
        assert!(parse_path_equations("vertices: p\nequation: x = x").is_err());
        assert!(GraphSpec::new(vec!["p".into(), "p".into()], vec![]).is_err());
    }

    #[test]
    fn renamed_vertices_change_order() {
        let text = KNAST_TEXT.replace("p", "z");
        let eq = parse_path_equations(&text).unwrap().pop().unwrap();
        assert!(!eq.is_knast());
        let c = group(2);
        let limits = Limits::default();
        assert_eq!(
            check_path_equations(&c, std::slice::from_ref(&eq), &limits).unwrap(),
            check_path_equation(&c, &eq, &limits).unwrap()
        );
    }

    #[test]
    fn guard_fires() {
        let c = group(8);
        let limits = Limits {
            max_assignments: 100,
            ..Limits::default()
        };
        let err = check_path_equation(&c, &knast_equation(), &limits).unwrap_err();
        assert!(matches!(err, Error::Guard { actual: 4096, .. }));
    }
}
