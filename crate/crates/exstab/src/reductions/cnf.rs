//! CNF formulas, DIMACS text, and normalisation to (2,2)-3SAT.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

/// Signed, 1-based variable index as in DIMACS.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("literal {lit} occurs {count} times; at most two are allowed")]
    TooManyOccurrences { lit: Literal, count: usize },
}

fn syntax(line: usize, msg: impl Into<String>) -> CnfError {
    CnfError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// DIMACS: optional `c` comments, a `p cnf <vars> <clauses>` header, then
/// clauses as signed integers terminated by `0` (possibly spanning lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<Literal> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(syntax(ln, "expected `p cnf <vars> <clauses>`"));
            }
            let v = parts[2]
                .parse()
                .map_err(|_| syntax(ln, "bad variable count"))?;
            let c = parts[3]
                .parse()
                .map_err(|_| syntax(ln, "bad clause count"))?;
            header = Some((v, c, ln));
            continue;
        }
        let Some((nv, _, _)) = header else {
            return Err(syntax(ln, "clause before header"));
        };
        for tok in line.split_whitespace() {
            let lit: Literal = tok
                .parse()
                .map_err(|_| syntax(ln, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut cur));
            } else {
                if lit.unsigned_abs() as usize > nv {
                    return Err(syntax(ln, format!("literal {lit} exceeds {nv} variables")));
                }
                cur.push(lit);
            }
        }
    }
    let Some((nv, nc, ln)) = header else {
        return Err(syntax(1, "missing `p cnf` header"));
    };
    if !cur.is_empty() {
        clauses.push(cur);
    }
    if clauses.len() != nc {
        return Err(syntax(
            ln,
            format!("header declares {nc} clauses, found {}", clauses.len()),
        ));
    }
    Ok(CnfFormula {
        num_vars: nv,
        clauses,
    })
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Self {
        CnfFormula { num_vars, clauses }
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&format!("{l} "));
            }
            s.push_str("0\n");
        }
        s
    }

    /// Occurrences of each literal, keyed by the signed literal.
    pub fn occurrences(&self) -> HashMap<Literal, usize> {
        let mut occ = HashMap::new();
        for c in &self.clauses {
            for &l in c {
                *occ.entry(l).or_insert(0) += 1;
            }
        }
        occ
    }

    /// Clause sizes at most three, no repeated or complementary literals in a
    /// clause, and every literal of every variable occurring exactly twice.
    pub fn validate_22(&self) -> Result<(), String> {
        for (j, c) in self.clauses.iter().enumerate() {
            if c.is_empty() || c.len() > 3 {
                return Err(format!("clause {} has {} literals", j + 1, c.len()));
            }
            let vars: BTreeSet<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            if vars.len() != c.len() {
                return Err(format!("clause {} repeats a variable", j + 1));
            }
        }
        let occ = self.occurrences();
        for v in 1..=self.num_vars as Literal {
            for l in [v, -v] {
                let k = occ.get(&l).copied().unwrap_or(0);
                if k != 2 {
                    return Err(format!("literal {l} occurs {k} times"));
                }
            }
        }
        Ok(())
    }

    pub fn is_22_valid(&self) -> bool {
        self.validate_22().is_ok()
    }

    pub fn evaluate(&self, sigma: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| lit_value(l, sigma)))
    }

    /// First satisfying assignment in binary counting order (variable 1 is
    /// the lowest bit). Exponential.
    pub fn brute_force_sat(&self) -> Option<Vec<bool>> {
        assert!(
            self.num_vars < 32,
            "exhaustive search is limited to 31 variables"
        );
        (0u64..1 << self.num_vars)
            .map(|bits| {
                (0..self.num_vars)
                    .map(|i| bits >> i & 1 == 1)
                    .collect::<Vec<_>>()
            })
            .find(|s| self.evaluate(s))
    }
}

pub fn lit_value(l: Literal, sigma: &[bool]) -> bool {
    let v = sigma[l.unsigned_abs() as usize - 1];
    if l > 0 {
        v
    } else {
        !v
    }
}

/// Equisatisfiable (2,2)-3SAT formula.
///
/// Tautologies are dropped, repeated literals merged, and pure variables set
/// (repeatedly) to satisfy their clauses; surviving variables are renumbered
/// in order of first appearance. Each literal then occurring once gets fresh
/// variables `a`, `b` and the clauses `(lit, a, ¬b) (a, ¬b) (¬a, b) (¬a, b)`.
pub fn r3sat_to_223sat(f: &CnfFormula) -> Result<CnfFormula, CnfError> {
    if f.is_22_valid() {
        return Ok(f.clone());
    }
    for (&lit, &count) in &f.occurrences() {
        if count > 2 {
            return Err(CnfError::TooManyOccurrences { lit, count });
        }
    }
    let mut clauses: Vec<Vec<Literal>> = f
        .clauses
        .iter()
        .filter(|c| !c.iter().any(|l| c.contains(&-l)))
        .map(|c| {
            let mut seen = Vec::new();
            for &l in c {
                if !seen.contains(&l) {
                    seen.push(l);
                }
            }
            seen
        })
        .collect();
    loop {
        let occ: BTreeSet<Literal> = clauses.iter().flatten().copied().collect();
        let pure: BTreeSet<Literal> = occ.iter().copied().filter(|l| !occ.contains(&-l)).collect();
        if pure.is_empty() {
            break;
        }
        clauses.retain(|c| !c.iter().any(|l| pure.contains(l)));
    }
    let mut renum: HashMap<u32, Literal> = HashMap::new();
    for c in &clauses {
        for l in c {
            let next = renum.len() as Literal + 1;
            renum.entry(l.unsigned_abs()).or_insert(next);
        }
    }
    let mut clauses: Vec<Vec<Literal>> = clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|l| renum[&l.unsigned_abs()] * l.signum())
                .collect()
        })
        .collect();
    let mut num_vars = renum.len();
    let base = num_vars as Literal;
    let mut once: Vec<Literal> = Vec::new();
    for v in 1..=base {
        for l in [v, -v] {
            if clauses.iter().flatten().filter(|&&x| x == l).count() == 1 {
                once.push(l);
            }
        }
    }
    for l in once {
        let a = num_vars as Literal + 1;
        let b = a + 1;
        num_vars += 2;
        clauses.push(vec![l, a, -b]);
        clauses.push(vec![a, -b]);
        clauses.push(vec![-a, b]);
        clauses.push(vec![-a, b]);
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Every (2,2)-valid formula on exactly `n` variables, one per class under
/// renaming variables and flipping polarities, clauses sorted.
pub fn all_22_formulas(n: usize) -> Vec<CnfFormula> {
    let lits: Vec<Literal> = (1..=n as Literal).flat_map(|v| [v, -v]).collect();
    let mut kinds: Vec<Vec<Literal>> = Vec::new();
    let k = lits.len();
    for mask in 1u32..1 << k {
        let c: Vec<Literal> = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| lits[i])
            .collect();
        if c.len() <= 3 && !c.iter().any(|l| c.contains(&-l)) {
            kinds.push(c);
        }
    }
    fn rec(
        kinds: &[Vec<Literal>],
        start: usize,
        left: &mut HashMap<Literal, usize>,
        cur: &mut Vec<Vec<Literal>>,
        out: &mut Vec<Vec<Vec<Literal>>>,
    ) {
        if left.values().all(|&c| c == 0) {
            out.push(cur.clone());
            return;
        }
        for (i, kind) in kinds.iter().enumerate().skip(start) {
            if kind.iter().all(|l| left[l] > 0) {
                for l in kind {
                    *left.get_mut(l).unwrap() -= 1;
                }
                cur.push(kind.clone());
                rec(kinds, i, left, cur, out);
                cur.pop();
                for l in kind {
                    *left.get_mut(l).unwrap() += 1;
                }
            }
        }
    }
    let mut left: HashMap<Literal, usize> = lits.iter().map(|&l| (l, 2)).collect();
    let mut raw = Vec::new();
    rec(&kinds, 0, &mut left, &mut Vec::new(), &mut raw);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for clauses in raw {
        let canon = canonical(n, &clauses);
        if seen.insert(canon.clone()) {
            out.push(CnfFormula::new(n, canon));
        }
    }
    out
}

fn canonical(n: usize, clauses: &[Vec<Literal>]) -> Vec<Vec<Literal>> {
    let mut best: Option<Vec<Vec<Literal>>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for flips in 0u32..1 << n {
            let mut cs: Vec<Vec<Literal>> = clauses
                .iter()
                .map(|c| {
                    let mut m: Vec<Literal> = c
                        .iter()
                        .map(|&l| {
                            let v = l.unsigned_abs() as usize - 1;
                            let s = if flips >> v & 1 == 1 {
                                -l.signum()
                            } else {
                                l.signum()
                            };
                            (perm[v] as Literal + 1) * s
                        })
                        .collect();
                    m.sort_by_key(|l| (l.unsigned_abs(), -l.signum()));
                    m
                })
                .collect();
            cs.sort();
            if best.as_ref().is_none_or(|b| cs < *b) {
                best = Some(cs);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let f = parse_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3\n-1 0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![2, 3, -1]]);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
        assert!(parse_dimacs("1 2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
    }

    #[test]
    fn valid_formula_is_unchanged() {
        let f = CnfFormula::new(1, vec![vec![1], vec![1], vec![-1], vec![-1]]);
        assert!(f.is_22_valid());
        assert_eq!(r3sat_to_223sat(&f).unwrap(), f);
    }

    #[test]
    fn single_occurrence_gets_four_clauses() {
        // x1 once positively, twice negatively
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![-1, -2], vec![-1, 2], vec![-2]]);
        let g = r3sat_to_223sat(&f).unwrap();
        assert!(g.is_22_valid(), "{g:?}");
        assert!(g.clauses.contains(&vec![1, 3, -4]));
        assert!(g.clauses.contains(&vec![3, -4]));
        assert_eq!(g.clauses.iter().filter(|c| **c == vec![-3, 4]).count(), 2);
        assert_eq!(f.brute_force_sat().is_some(), g.brute_force_sat().is_some());
    }

    #[test]
    fn pure_variables_are_removed() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![2], vec![-2]]);
        let g = r3sat_to_223sat(&f).unwrap();
        // x1 is pure; x2 survives as variable 1 and both its literals get padded
        assert_eq!(g.num_vars, 5);
        assert_eq!(g.clauses[..2], [vec![1], vec![-1]]);
        assert!(g.is_22_valid());
        assert!(g.brute_force_sat().is_none());
        assert!(r3sat_to_223sat(&CnfFormula::new(1, vec![vec![1], vec![1], vec![1]])).is_err());
    }

    #[test]
    fn exhaustive_formulas() {
        let one = all_22_formulas(1);
        assert_eq!(
            one,
            vec![CnfFormula::new(
                1,
                vec![vec![-1], vec![-1], vec![1], vec![1]]
            )]
        );
        for n in 1..=3 {
            for f in all_22_formulas(n) {
                assert!(f.is_22_valid());
            }
        }
    }
}
