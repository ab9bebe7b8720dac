use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::globes::{Dim, GlobeMap};
use crate::pasting::{CellRef, Table};

/// Identifier of a formal lifting symbol, printed `h#n`.
pub type SymbolId = u32;

/// An arrow `D_j -> T` of a free globular extension of `Θ₀`.
///
/// `Glob` is a cell of the globular sum `T` (an arrow of `Θ₀`). `Lift` is
/// `post ∘ h ∘ pre`: a lifting symbol `h : D_n -> X` precomposed with a globe
/// map into `D_n` and postcomposed with the arrow `X -> T` whose restriction to
/// summand `k` of `X` is `post[k]`.
///
/// In normal form `pre` is always an identity: any other globe map factors
/// through `σ_n` or `τ_n` and reduces by the lifting equations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Glob { cod: Arc<Table>, cell: CellRef },
    Lift { sym: SymbolId, post: Arc<[Term]>, pre: GlobeMap },
}

impl Term {
    pub fn glob(cod: &Arc<Table>, cell: CellRef) -> Term {
        Term::Glob { cod: Arc::clone(cod), cell }
    }

    /// The lifting symbol itself, as an arrow into its own codomain.
    pub fn lift(sym: SymbolId, post: Vec<Term>, out_dim: Dim) -> Term {
        Term::Lift { sym, post: post.into(), pre: GlobeMap::identity(out_dim) }
    }

    /// Dimension `j` of the domain disk.
    pub fn dim(&self) -> Dim {
        match self {
            Term::Glob { cell, .. } => cell.dim,
            Term::Lift { pre, .. } => pre.src_dim(),
        }
    }

    pub fn cod(&self) -> &Table {
        match self {
            Term::Glob { cod, .. } => cod,
            Term::Lift { post, .. } => post[0].cod(),
        }
    }

    pub fn cod_arc(&self) -> &Arc<Table> {
        match self {
            Term::Glob { cod, .. } => cod,
            Term::Lift { post, .. } => post[0].cod_arc(),
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Glob { .. } => 1,
            Term::Lift { post, .. } => 1 + post.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Glob { .. } => 0,
            Term::Lift { post, .. } => 1 + post.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn is_glob(&self) -> bool {
        matches!(self, Term::Glob { .. })
    }

    /// Every symbol occurring in the term.
    pub fn symbols(&self, out: &mut Vec<SymbolId>) {
        if let Term::Lift { sym, post, .. } = self {
            out.push(*sym);
            for c in post.iter() {
                c.symbols(out);
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Glob { cod, cell } => write!(f, "(glob {cod} {} {})", cell.dim, cell.index),
            Term::Lift { sym, post, pre } => {
                write!(f, "(lift h#{sym} [")?;
                for (n, c) in post.iter().enumerate() {
                    if n > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "] {pre})")
            }
        }
    }
}

/// Grammar:
///
/// ```text
/// term  := "(glob" table dim index ")"
///        | "(lift" "h#" id "[" term* "]" globe ")"
/// table := "(" dims ["|" dims] ")"
/// globe := "id_" n | "s^" j "_" i | "t^" j "_" i
/// ```
impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        let mut p = Parser { src: s, pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(Error::Parse(format!("trailing input at byte {}", p.pos)));
        }
        Ok(t)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{tok}` at byte {}", self.pos)))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn word(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() || "()[]".contains(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a word at byte {start}")));
        }
        Ok(&self.src[start..self.pos])
    }

    fn number(&mut self) -> Result<usize> {
        let w = self.word()?;
        w.parse().map_err(|_| Error::Parse(format!("bad number `{w}`")))
    }

    fn table(&mut self) -> Result<Table> {
        self.skip_ws();
        let start = self.pos;
        let close = self.src[start..].find(')').ok_or_else(|| Error::Parse("unterminated table".into()))?;
        self.pos = start + close + 1;
        self.src[start..self.pos].parse()
    }

    fn term(&mut self) -> Result<Term> {
        self.expect("(")?;
        let head = self.word()?.to_string();
        let t = match head.as_str() {
            "glob" => {
                let cod = Arc::new(self.table()?);
                let dim = self.number()?;
                let index = self.number()?;
                Term::Glob { cod, cell: CellRef::new(dim, index) }
            }
            "lift" => {
                let name = self.word()?;
                let sym: SymbolId = name
                    .strip_prefix("h#")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad symbol `{name}`")))?;
                self.expect("[")?;
                let mut post = Vec::new();
                while self.peek() == Some('(') {
                    post.push(self.term()?);
                }
                self.expect("]")?;
                let pre: GlobeMap = self.word()?.parse()?;
                if post.is_empty() {
                    return Err(Error::Parse("a lifting needs at least one component".into()));
                }
                Term::Lift { sym, post: post.into(), pre }
            }
            other => return Err(Error::Parse(format!("unknown term head `{other}`"))),
        };
        self.expect(")")?;
        Ok(t)
    }
}
