//! Preference profiles, matchings and the acceptability graph.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Dense agent handle. Ids run from 0 to `len - 1`.
pub type AgentId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate agent name `{0}`")]
    DuplicateName(String),
    #[error("invalid agent name `{0}`")]
    BadName(String),
    #[error("agent `{agent}` lists `{other}` more than once")]
    DuplicateEntry { agent: String, other: String },
    #[error("agent `{0}` lists itself")]
    SelfListed(String),
    #[error("agent `{0}` has an empty preference list")]
    EmptyList(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("symmetry violation: `{0}` lists `{1}` but `{1}` does not list `{0}`")]
    Symmetry(String, String),
    #[error("bipartition violation: {0}")]
    Bipartition(String),
    #[error("`{judge}` cannot compare `{a}` and `{b}`")]
    NotComparable { judge: String, a: String, b: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("`{0}` and `{1}` are not mutually acceptable")]
    NotAnEdge(String, String),
    #[error("agent `{0}` appears in more than one pair")]
    Overlap(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum RankTable {
    /// `n x n` table, `u32::MAX` for unacceptable.
    Dense(Vec<u32>),
    /// Per judge, (agent, position) sorted by agent.
    Sparse(Vec<Vec<(AgentId, u32)>>),
}

const DENSE_LIMIT: usize = 2048;

/// A strict, symmetric, possibly incomplete preference profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    names: Vec<String>,
    index: HashMap<String, AgentId>,
    prefs: Vec<Vec<AgentId>>,
    sides: Option<(Vec<AgentId>, Vec<AgentId>)>,
    side_of: Vec<u8>,
    ranks: RankTable,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, ':' | ',' | ';' | '#' | '='))
}

impl Profile {
    /// Builds and validates a profile from names and id-based lists.
    pub fn new(
        names: Vec<String>,
        prefs: Vec<Vec<AgentId>>,
        sides: Option<(Vec<AgentId>, Vec<AgentId>)>,
    ) -> Result<Self, ProfileError> {
        let n = names.len();
        assert_eq!(prefs.len(), n, "one preference list per agent");
        let mut index = HashMap::with_capacity(n);
        for (id, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(ProfileError::BadName(name.clone()));
            }
            if index.insert(name.clone(), id).is_some() {
                return Err(ProfileError::DuplicateName(name.clone()));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for (a, list) in prefs.iter().enumerate() {
            if list.is_empty() {
                return Err(ProfileError::EmptyList(names[a].clone()));
            }
            for &b in list {
                if b >= n {
                    return Err(ProfileError::UnknownAgent(format!("#{b}")));
                }
                if b == a {
                    return Err(ProfileError::SelfListed(names[a].clone()));
                }
                if seen[b] == a {
                    return Err(ProfileError::DuplicateEntry {
                        agent: names[a].clone(),
                        other: names[b].clone(),
                    });
                }
                seen[b] = a;
            }
        }
        let ranks = build_ranks(n, &prefs);
        let lookup = |j: AgentId, a: AgentId| rank_lookup(&ranks, n, j, a);
        for (a, list) in prefs.iter().enumerate() {
            for &b in list {
                if lookup(b, a).is_none() {
                    return Err(ProfileError::Symmetry(names[a].clone(), names[b].clone()));
                }
            }
        }
        let mut side_of = vec![0u8; n];
        if let Some((u, w)) = &sides {
            if u.len() != w.len() {
                return Err(ProfileError::Bipartition(format!(
                    "sides have sizes {} and {}",
                    u.len(),
                    w.len()
                )));
            }
            let mut mark = vec![0u8; n];
            for (s, set) in [(1u8, u), (2u8, w)] {
                for &x in set {
                    if x >= n {
                        return Err(ProfileError::UnknownAgent(format!("#{x}")));
                    }
                    if mark[x] != 0 {
                        return Err(ProfileError::Bipartition(format!(
                            "`{}` listed twice",
                            names[x]
                        )));
                    }
                    mark[x] = s;
                }
            }
            if let Some(x) = mark.iter().position(|&m| m == 0) {
                return Err(ProfileError::Bipartition(format!(
                    "`{}` is on neither side",
                    names[x]
                )));
            }
            for (a, list) in prefs.iter().enumerate() {
                for &b in list {
                    if mark[a] == mark[b] {
                        return Err(ProfileError::Bipartition(format!(
                            "`{}` and `{}` are on the same side",
                            names[a], names[b]
                        )));
                    }
                }
            }
            side_of = mark;
        }
        Ok(Profile {
            names,
            index,
            prefs,
            sides,
            side_of,
            ranks,
        })
    }

    /// Convenience constructor from name-based lists, in agent order.
    pub fn from_named(
        lists: &[(&str, &[&str])],
        sides: Option<(&[&str], &[&str])>,
    ) -> Result<Self, ProfileError> {
        let names: Vec<String> = lists.iter().map(|(n, _)| n.to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(ProfileError::DuplicateName(n.clone()));
            }
        }
        let id = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| ProfileError::UnknownAgent(s.to_string()))
        };
        let mut prefs = Vec::with_capacity(lists.len());
        for (_, l) in lists {
            prefs.push(l.iter().map(|s| id(s)).collect::<Result<Vec<_>, _>>()?);
        }
        let sides = match sides {
            Some((u, w)) => Some((
                u.iter().map(|s| id(s)).collect::<Result<Vec<_>, _>>()?,
                w.iter().map(|s| id(s)).collect::<Result<Vec<_>, _>>()?,
            )),
            None => None,
        };
        Profile::new(names, prefs, sides)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn agents(&self) -> std::ops::Range<AgentId> {
        0..self.len()
    }

    pub fn name(&self, a: AgentId) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<AgentId> {
        self.index.get(name).copied()
    }

    /// Preference list of `a`, most preferred first.
    pub fn prefs(&self, a: AgentId) -> &[AgentId] {
        &self.prefs[a]
    }

    pub fn sides(&self) -> Option<(&[AgentId], &[AgentId])> {
        self.sides
            .as_ref()
            .map(|(u, w)| (u.as_slice(), w.as_slice()))
    }

    /// 1 for U, 2 for W, 0 when the profile has no bipartition.
    pub fn side(&self, a: AgentId) -> u8 {
        self.side_of[a]
    }

    pub fn is_bipartite(&self) -> bool {
        self.sides.is_some()
    }

    pub fn degree(&self, a: AgentId) -> usize {
        self.prefs[a].len()
    }

    /// Maximum preference list length.
    pub fn max_length(&self) -> usize {
        self.prefs.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Complete graph, or complete bipartite graph on the two sides.
    pub fn is_complete(&self) -> bool {
        let n = self.len();
        match &self.sides {
            Some((u, w)) => self.agents().all(|a| {
                self.degree(a)
                    == if self.side_of[a] == 1 {
                        w.len()
                    } else {
                        u.len()
                    }
            }),
            None => self.agents().all(|a| self.degree(a) + 1 == n),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.prefs.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Position of `a` in `judge`'s list; the judge itself ranks last.
    #[inline]
    pub fn rank(&self, judge: AgentId, a: AgentId) -> Option<usize> {
        if a == judge {
            return Some(self.prefs[judge].len());
        }
        rank_lookup(&self.ranks, self.len(), judge, a)
    }

    #[inline]
    pub fn is_acceptable(&self, judge: AgentId, a: AgentId) -> bool {
        a != judge && rank_lookup(&self.ranks, self.len(), judge, a).is_some()
    }

    /// Strict comparison with the self-ranking convention.
    pub fn prefers(&self, judge: AgentId, a: AgentId, b: AgentId) -> Result<bool, ProfileError> {
        match (self.rank(judge, a), self.rank(judge, b)) {
            (Some(ra), Some(rb)) if a != b => Ok(ra < rb),
            _ => Err(ProfileError::NotComparable {
                judge: self.names[judge].clone(),
                a: self.names[a].clone(),
                b: self.names[b].clone(),
            }),
        }
    }

    /// Unchecked variant of [`Profile::prefers`]; unacceptable agents rank below everything.
    #[inline]
    pub(crate) fn prefers_fast(&self, judge: AgentId, a: AgentId, b: AgentId) -> bool {
        let ra = self.rank(judge, a).unwrap_or(usize::MAX);
        let rb = self.rank(judge, b).unwrap_or(usize::MAX);
        ra < rb
    }

    pub fn acceptability_graph(&self) -> Graph {
        let adj = self
            .prefs
            .iter()
            .map(|l| {
                let mut v = l.clone();
                v.sort_unstable();
                v
            })
            .collect();
        Graph { adj }
    }
}

fn build_ranks(n: usize, prefs: &[Vec<AgentId>]) -> RankTable {
    if n <= DENSE_LIMIT {
        let mut t = vec![u32::MAX; n * n];
        for (j, l) in prefs.iter().enumerate() {
            for (pos, &a) in l.iter().enumerate() {
                if a < n {
                    t[j * n + a] = pos as u32;
                }
            }
        }
        RankTable::Dense(t)
    } else {
        RankTable::Sparse(
            prefs
                .iter()
                .map(|l| {
                    let mut v: Vec<(AgentId, u32)> =
                        l.iter().enumerate().map(|(p, &a)| (a, p as u32)).collect();
                    v.sort_unstable();
                    v
                })
                .collect(),
        )
    }
}

#[inline]
fn rank_lookup(t: &RankTable, n: usize, judge: AgentId, a: AgentId) -> Option<usize> {
    match t {
        RankTable::Dense(v) => {
            let r = v[judge * n + a];
            (r != u32::MAX).then_some(r as usize)
        }
        RankTable::Sparse(v) => {
            let row = &v[judge];
            row.binary_search_by_key(&a, |&(x, _)| x)
                .ok()
                .map(|i| row[i].1 as usize)
        }
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    pub adj: Vec<Vec<usize>>,
}

/// The acceptability graph of a profile.
pub type AcceptabilityGraph = Graph;

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Adds `{a, b}` unless present. Keeps lists sorted.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "self loop");
        if let Err(i) = self.adj[a].binary_search(&b) {
            self.adj[a].insert(i, b);
            let j = self.adj[b].binary_search(&a).unwrap_err();
            self.adj[b].insert(j, a);
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, l) in self.adj.iter().enumerate() {
            out.extend(l.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![s];
            comp[s] = c;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subgraph on `verts`, relabelled 0..verts.len() in the given order.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut pos = HashMap::with_capacity(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut g = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(&j) = pos.get(&w) {
                    if i < j {
                        g.adj[i].push(j);
                        g.adj[j].push(i);
                    }
                }
            }
        }
        for l in &mut g.adj {
            l.sort_unstable();
        }
        g
    }
}

/// A set of disjoint pairs; `partner(x) == x` for unmatched agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    mate: Vec<usize>,
}

const FREE: usize = usize::MAX;

impl Matching {
    /// The empty matching over `n` agents.
    pub fn empty(n: usize) -> Self {
        Matching {
            mate: vec![FREE; n],
        }
    }

    /// Builds a matching from pairs without checking acceptability.
    pub fn from_pairs_unchecked(n: usize, pairs: &[(AgentId, AgentId)]) -> Self {
        let mut m = Matching::empty(n);
        for &(a, b) in pairs {
            m.pair(a, b);
        }
        m
    }

    /// Builds a matching and checks it against the profile.
    pub fn from_pairs(p: &Profile, pairs: &[(AgentId, AgentId)]) -> Result<Self, MatchingError> {
        let mut m = Matching::empty(p.len());
        for &(a, b) in pairs {
            if a >= p.len() || b >= p.len() {
                return Err(MatchingError::UnknownAgent(format!("#{}", a.max(b))));
            }
            if !p.is_acceptable(a, b) {
                return Err(MatchingError::NotAnEdge(
                    p.name(a).to_string(),
                    p.name(b).to_string(),
                ));
            }
            for x in [a, b] {
                if m.mate[x] != FREE {
                    return Err(MatchingError::Overlap(p.name(x).to_string()));
                }
            }
            m.pair(a, b);
        }
        Ok(m)
    }

    /// Name-based constructor.
    pub fn from_names(p: &Profile, pairs: &[(&str, &str)]) -> Result<Self, MatchingError> {
        let id = |s: &str| {
            p.id(s)
                .ok_or_else(|| MatchingError::UnknownAgent(s.to_string()))
        };
        let ids = pairs
            .iter()
            .map(|(a, b)| Ok((id(a)?, id(b)?)))
            .collect::<Result<Vec<_>, MatchingError>>()?;
        Matching::from_pairs(p, &ids)
    }

    pub fn len(&self) -> usize {
        self.mate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mate.is_empty()
    }

    /// Partner of `x`, or `x` itself when unmatched.
    #[inline]
    pub fn partner(&self, x: AgentId) -> AgentId {
        match self.mate[x] {
            FREE => x,
            y => y,
        }
    }

    #[inline]
    pub fn mate(&self, x: AgentId) -> Option<AgentId> {
        match self.mate[x] {
            FREE => None,
            y => Some(y),
        }
    }

    #[inline]
    pub fn is_matched(&self, x: AgentId) -> bool {
        self.mate[x] != FREE
    }

    /// Matches `a` with `b`, releasing any previous partners.
    pub fn pair(&mut self, a: AgentId, b: AgentId) {
        assert!(a != b);
        self.unpair(a);
        self.unpair(b);
        self.mate[a] = b;
        self.mate[b] = a;
    }

    /// Makes `a` (and its partner) unmatched.
    pub fn unpair(&mut self, a: AgentId) {
        if let Some(b) = self.mate(a) {
            self.mate[b] = FREE;
            self.mate[a] = FREE;
        }
    }

    /// Pairs `(a, b)` with `a < b`, sorted.
    pub fn pairs(&self) -> Vec<(AgentId, AgentId)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(a, &b)| b != FREE && a < b)
            .map(|(a, &b)| (a, b))
            .collect()
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&b| b != FREE).count() / 2
    }

    pub fn contains(&self, a: AgentId, b: AgentId) -> bool {
        self.mate[a] == b
    }
}

/// Parses the profile text format.
pub fn parse_profile(text: &str) -> Result<Profile, ProfileError> {
    let mut header: Option<(Vec<String>, Vec<String>, usize)> = None;
    let mut rows: Vec<(String, Vec<String>, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |msg: &str| ProfileError::Syntax {
            line: line_no,
            msg: msg.to_string(),
        };
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax("expected `name: partners`"))?;
        let head = head.trim();
        if head == "bipartite" {
            if header.is_some() || !rows.is_empty() {
                return Err(syntax("bipartite header must come first and only once"));
            }
            let (us, ws) = rest
                .split_once(';')
                .ok_or_else(|| syntax("expected `U = ... ; W = ...`"))?;
            let side = |s: &str, key: &str| -> Result<Vec<String>, ProfileError> {
                let (k, v) = s
                    .split_once('=')
                    .ok_or_else(|| syntax("expected `=` in bipartite header"))?;
                if k.trim() != key {
                    return Err(syntax(&format!("expected side `{key}`")));
                }
                let names: Vec<String> = v
                    .split(',')
                    .map(|t| t.trim().to_string())
                    .filter(|t| !t.is_empty())
                    .collect();
                Ok(names)
            };
            header = Some((side(us, "U")?, side(ws, "W")?, line_no));
            continue;
        }
        if !valid_name(head) {
            return Err(syntax(&format!("invalid agent name `{head}`")));
        }
        let list = rest.split_whitespace().map(str::to_string).collect();
        rows.push((head.to_string(), list, line_no));
    }
    let mut index: HashMap<&str, AgentId> = HashMap::new();
    for (i, (name, _, _)) in rows.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(ProfileError::DuplicateName(name.clone()));
        }
    }
    let mut prefs = Vec::with_capacity(rows.len());
    for (name, list, line) in &rows {
        let mut ids = Vec::with_capacity(list.len());
        for s in list {
            match index.get(s.as_str()) {
                Some(&j) => ids.push(j),
                None if valid_name(s) => {
                    return Err(ProfileError::Symmetry(name.clone(), s.clone()));
                }
                None => {
                    return Err(ProfileError::Syntax {
                        line: *line,
                        msg: format!("invalid agent name `{s}`"),
                    })
                }
            }
        }
        prefs.push(ids);
    }
    let sides = match header {
        Some((u, w, line)) => {
            let lookup = |v: &[String]| -> Result<Vec<AgentId>, ProfileError> {
                v.iter()
                    .map(|s| {
                        index.get(s.as_str()).copied().ok_or_else(|| {
                            ProfileError::Bipartition(format!(
                                "line {line}: `{s}` has no preference line"
                            ))
                        })
                    })
                    .collect()
            };
            Some((lookup(&u)?, lookup(&w)?))
        }
        None => None,
    };
    let names = rows.into_iter().map(|(n, _, _)| n).collect();
    Profile::new(names, prefs, sides)
}

/// Canonical text form: header (if bipartite), then one line per agent in id order.
pub fn serialize_profile(p: &Profile) -> String {
    let mut s = String::new();
    if let Some((u, w)) = p.sides() {
        let join = |v: &[AgentId]| v.iter().map(|&a| p.name(a)).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "bipartite: U = {} ; W = {}", join(u), join(w));
    }
    for a in p.agents() {
        let list: Vec<&str> = p.prefs(a).iter().map(|&b| p.name(b)).collect();
        let _ = writeln!(s, "{}: {}", p.name(a), list.join(" "));
    }
    s
}

/// Parses a matching file: one `name1 name2` pair per line.
pub fn parse_matching(p: &Profile, text: &str) -> Result<Matching, MatchingError> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(MatchingError::Syntax {
                line: lineno + 1,
                msg: "expected two agent names".into(),
            });
        }
        let id = |s: &str| {
            p.id(s)
                .ok_or_else(|| MatchingError::UnknownAgent(s.to_string()))
        };
        pairs.push((id(toks[0])?, id(toks[1])?));
    }
    Matching::from_pairs(p, &pairs)
}

/// One pair per line, sorted by the smaller id.
pub fn serialize_matching(p: &Profile, m: &Matching) -> String {
    let mut s = String::new();
    for (a, b) in m.pairs() {
        let _ = writeln!(s, "{} {}", p.name(a), p.name(b));
    }
    s
}
