//! Symbolic matrix products: factors, words, the text grammar and the
//! cyclic/transposition algebra on words.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycle::{ColoredCycle, DirectedColor, Orientation};
use crate::error::{Error, Result};

/// How a variable enters a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Marker {
    Plain,
    Transpose,
    Sym,
}

impl Marker {
    /// Marker of the transposed factor. `Sym` is fixed.
    #[inline]
    pub fn transposed(self) -> Marker {
        match self {
            Marker::Plain => Marker::Transpose,
            Marker::Transpose => Marker::Plain,
            Marker::Sym => Marker::Sym,
        }
    }
}

/// Dense index into a word's variable table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub var: VarId,
    pub marker: Marker,
}

impl Factor {
    pub fn new(var: VarId, marker: Marker) -> Self {
        Factor { var, marker }
    }

    #[inline]
    pub fn transposed(self) -> Factor {
        Factor {
            var: self.var,
            marker: self.marker.transposed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub symmetric: bool,
}

/// A product of factors over a shared variable table.
///
/// The empty product is representable (it is the half-word of a degree-one
/// certificate) but [`parse_word`] never produces it.
#[derive(Clone, Debug)]
pub struct Word {
    factors: Vec<Factor>,
    vars: Vec<Variable>,
    warnings: Vec<String>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors && self.vars == other.vars
    }
}

impl Eq for Word {}

impl Word {
    /// Builds a word and normalizes it. Fails if a factor references a
    /// variable outside the table.
    pub fn new(factors: Vec<Factor>, vars: Vec<Variable>) -> Result<Word> {
        if let Some(f) = factors.iter().find(|f| f.var.0 >= vars.len()) {
            return Err(Error::Parse(format!(
                "factor references unknown variable id {}",
                f.var.0
            )));
        }
        Ok(normalize(&Word {
            factors,
            vars,
            warnings: Vec::new(),
        }))
    }

    /// Word over the same variable table with the given factors.
    pub fn with_factors(&self, factors: Vec<Factor>) -> Word {
        debug_assert!(factors.iter().all(|f| f.var.0 < self.vars.len()));
        Word {
            factors,
            vars: self.vars.clone(),
            warnings: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name).map(VarId)
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Variables that occur in the word, in order of first occurrence.
    pub fn used_vars(&self) -> Vec<VarId> {
        let mut seen = vec![false; self.vars.len()];
        let mut out = Vec::new();
        for f in &self.factors {
            if !seen[f.var.0] {
                seen[f.var.0] = true;
                out.push(f.var);
            }
        }
        out
    }

    pub fn has_sym(&self) -> bool {
        self.factors.iter().any(|f| f.marker == Marker::Sym)
    }

    /// Concatenation; `other` must share this word's variable table.
    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.vars, other.vars);
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        self.with_factors(factors)
    }

    fn fmt_factor(&self, f: &Factor, out: &mut String) {
        out.push_str(&self.vars[f.var.0].name);
        if f.marker == Marker::Transpose {
            out.push_str("^T");
        }
    }

    /// The product line alone, `I` for the empty word.
    pub fn product_string(&self) -> String {
        if self.factors.is_empty() {
            return "I".to_string();
        }
        let mut s = String::new();
        for (i, f) in self.factors.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            self.fmt_factor(f, &mut s);
        }
        s
    }

    /// Names of symmetric variables used by the word.
    pub fn sym_names(&self) -> Vec<&str> {
        self.used_vars()
            .into_iter()
            .filter(|v| self.vars[v.0].symmetric)
            .map(|v| self.vars[v.0].name.as_str())
            .collect()
    }
}

/// Canonical printer: an optional `sym: A,B` header line followed by the
/// product line.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let syms = self.sym_names();
        if !syms.is_empty() {
            writeln!(f, "sym: {}", syms.join(","))?;
        }
        f.write_str(&self.product_string())
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Parses `A B^T C'`-style text. Factors are separated by whitespace or
/// `*`; `^T` and `'` mark transposes. A leading `sym: A,B` line adds to the
/// symmetric declarations, so the canonical printer output parses back.
pub fn parse_word<S: AsRef<str>>(text: &str, sym_names: &[S]) -> Result<Word> {
    let mut declared: BTreeSet<String> =
        sym_names.iter().map(|s| s.as_ref().trim().to_string()).collect();
    let mut body = String::new();
    for line in text.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("sym:") {
            for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                if !is_ident(name) {
                    return Err(Error::Parse(format!("bad symmetric name `{name}`")));
                }
                declared.insert(name.to_string());
            }
        } else {
            body.push_str(t);
            body.push(' ');
        }
    }

    let mut vars: Vec<Variable> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut factors = Vec::new();
    let mut warnings = Vec::new();
    for tok in body
        .split(|c: char| c.is_whitespace() || c == '*')
        .filter(|t| !t.is_empty())
    {
        let (name, transposed) = if let Some(n) = tok.strip_suffix("^T") {
            (n, true)
        } else if let Some(n) = tok.strip_suffix('\'') {
            (n, true)
        } else {
            (tok, false)
        };
        if !is_ident(name) {
            return Err(Error::Parse(format!("malformed factor `{tok}`")));
        }
        let sym = declared.contains(name);
        if sym && transposed {
            warnings.push(format!(
                "transpose on symmetric variable `{name}` absorbed"
            ));
        }
        let id = *index.entry(name.to_string()).or_insert_with(|| {
            vars.push(Variable {
                name: name.to_string(),
                symmetric: sym,
            });
            vars.len() - 1
        });
        let marker = if sym {
            Marker::Sym
        } else if transposed {
            Marker::Transpose
        } else {
            Marker::Plain
        };
        factors.push(Factor::new(VarId(id), marker));
    }
    if factors.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut w = normalize(&Word {
        factors,
        vars,
        warnings: Vec::new(),
    });
    w.warnings = warnings;
    Ok(w)
}

/// Propagates symmetry: a variable that is declared symmetric or occurs
/// once with `Sym` carries `Sym` at every occurrence.
pub fn normalize(w: &Word) -> Word {
    let mut vars = w.vars.clone();
    for f in &w.factors {
        if f.marker == Marker::Sym {
            vars[f.var.0].symmetric = true;
        }
    }
    let factors = w
        .factors
        .iter()
        .map(|f| {
            if vars[f.var.0].symmetric {
                Factor::new(f.var, Marker::Sym)
            } else {
                *f
            }
        })
        .collect();
    Word {
        factors,
        vars,
        warnings: w.warnings.clone(),
    }
}

/// `(X_1 X_2)^T = X_2^T X_1^T`.
pub fn transpose_word(w: &Word) -> Word {
    w.with_factors(w.factors.iter().rev().map(|f| f.transposed()).collect())
}

/// Left rotation: factor `j` becomes the first factor.
pub fn cyclic_shift(w: &Word, j: usize) -> Word {
    let k = w.degree();
    if k == 0 {
        return w.clone();
    }
    let j = j % k;
    let mut factors = Vec::with_capacity(k);
    factors.extend_from_slice(&w.factors[j..]);
    factors.extend_from_slice(&w.factors[..j]);
    w.with_factors(factors)
}

/// Least `j` with `cyclic_shift(w1, j) == w2` factor-wise.
pub fn eq_shift(w1: &Word, w2: &Word) -> Option<usize> {
    let k = w1.degree();
    if k != w2.degree() {
        return None;
    }
    if k == 0 {
        return Some(0);
    }
    let a = w1.factors();
    let b = w2.factors();
    (0..k).find(|&j| (0..k).all(|i| a[(j + i) % k] == b[i]))
}

/// Edge `i` of the cycle carries the orientation of factor `i`
/// (`Plain` = +1, `Transpose` = -1, `Sym` = 0) and its variable as color.
pub fn to_colored_cycle(w: &Word) -> ColoredCycle {
    ColoredCycle::new(
        w.factors()
            .iter()
            .map(|f| DirectedColor {
                orientation: match f.marker {
                    Marker::Plain => Orientation::Forward,
                    Marker::Transpose => Orientation::Backward,
                    Marker::Sym => Orientation::Neutral,
                },
                color: f.var.0,
            })
            .collect(),
    )
}
