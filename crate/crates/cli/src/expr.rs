use std::collections::HashMap;
use std::fmt;

use msset::marking::{
    gadget, join_marked, opposite_marked, pretensor, product_marked, tensor, Gadget, MarkedSSet,
};
use msset::sset::CellSet;
use serde::Serialize;

/// An expression over the named gadgets and the constructions on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gadget(Gadget),
    Join(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    Pretensor(Box<Expr>, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    Op(Box<Expr>),
    /// Union of two subobjects of an ambient object.
    Union {
        left: Box<Expr>,
        right: Box<Expr>,
        ambient: Box<Expr>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Syntax,
    Range,
}

/// A parse error with the byte range of the offending input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{} error at {start}..{end}: {message}", match .kind { ErrorKind::Syntax => "syntax", ErrorKind::Range => "range" })]
pub struct ParseError {
    pub kind: ErrorKind,
    pub message: String,
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gadget(g) => write!(f, "{}", g.expr()),
            Expr::Join(a, b) => write!(f, "join({a}, {b})"),
            Expr::Prod(a, b) => write!(f, "prod({a}, {b})"),
            Expr::Pretensor(a, b) => write!(f, "pretensor({a}, {b})"),
            Expr::Tensor(a, b) => write!(f, "tensor({a}, {b})"),
            Expr::Op(a) => write!(f, "op({a})"),
            Expr::Union {
                left,
                right,
                ambient,
            } => write!(f, "union({left}, {right} @ {ambient})"),
        }
    }
}

pub fn print(e: &Expr) -> String {
    e.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(isize),
    Open,
    Close,
    Comma,
    At,
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    len: usize,
}

fn syntax(message: impl Into<String>, start: usize, end: usize) -> ParseError {
    ParseError {
        kind: ErrorKind::Syntax,
        message: message.into(),
        start,
        end,
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((Tok::Open, i, i + 1)),
            b')' => out.push((Tok::Close, i, i + 1)),
            b',' => out.push((Tok::Comma, i, i + 1)),
            b'@' => out.push((Tok::At, i, i + 1)),
            b'-' | b'0'..=b'9' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s = &text[start..i];
                let v = s
                    .parse()
                    .map_err(|_| syntax(format!("bad integer '{s}'"), start, i))?;
                out.push((Tok::Int(v), start, i));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_ascii_lowercase()), start, i));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(
                    format!("unexpected character '{ch}'"),
                    i,
                    i + ch.len_utf8(),
                ));
            }
        }
        i += 1;
    }
    Ok(out)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.1, t.2))
            .unwrap_or((self.len, self.len))
    }

    fn end_of_previous(&self) -> usize {
        self.toks[self.pos - 1].2
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("'{s}'"),
            Some(Tok::Int(v)) => format!("'{v}'"),
            Some(Tok::Open) => "'('".into(),
            Some(Tok::Close) => "')'".into(),
            Some(Tok::Comma) => "','".into(),
            Some(Tok::At) => "'@'".into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            let (s, e) = self.here();
            Err(syntax(
                format!("expected {what}, found {}", self.describe()),
                s,
                e,
            ))
        }
    }

    fn int(&mut self) -> Result<isize, ParseError> {
        match self.peek() {
            Some(&Tok::Int(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => {
                let (s, e) = self.here();
                Err(syntax(
                    format!("expected an integer, found {}", self.describe()),
                    s,
                    e,
                ))
            }
        }
    }

    /// `INT` or `(INT)` after a one-parameter constructor.
    fn single(&mut self) -> Result<isize, ParseError> {
        if self.peek() == Some(&Tok::Open) {
            self.pos += 1;
            let v = self.int()?;
            self.expect(Tok::Close, "')'")?;
            Ok(v)
        } else {
            self.int()
        }
    }

    fn ints(&mut self, n: usize) -> Result<Vec<isize>, ParseError> {
        self.expect(Tok::Open, "'('")?;
        let mut out = Vec::new();
        for i in 0..n {
            if i > 0 {
                self.expect(Tok::Comma, "','")?;
            }
            out.push(self.int()?);
        }
        self.expect(Tok::Close, "')'")?;
        Ok(out)
    }

    fn operand(&mut self, in_join: bool) -> Result<Box<Expr>, ParseError> {
        Ok(Box::new(self.expr(in_join)?))
    }

    fn two(&mut self, in_join: bool) -> Result<(Box<Expr>, Box<Expr>), ParseError> {
        self.expect(Tok::Open, "'('")?;
        let a = self.operand(in_join)?;
        self.expect(Tok::Comma, "','")?;
        let b = self.operand(in_join)?;
        self.expect(Tok::Close, "')'")?;
        Ok((a, b))
    }

    fn expr(&mut self, in_join: bool) -> Result<Expr, ParseError> {
        let (start, end) = self.here();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => {
                return Err(syntax(
                    format!("expected an expression, found {}", self.describe()),
                    start,
                    end,
                ))
            }
        };
        self.pos += 1;
        let e = match name.as_str() {
            "delta" => Expr::Gadget(Gadget::Delta(self.single()?)),
            "deltat" => Expr::Gadget(Gadget::DeltaT(self.single()?)),
            "boundary" => Expr::Gadget(Gadget::Boundary(self.single()?)),
            "horn" | "deltak" | "deltakp" | "deltakpp" => {
                let v = self.ints(2)?;
                let (m, k) = (v[0], v[1]);
                Expr::Gadget(match name.as_str() {
                    "horn" => Gadget::Horn { m, k },
                    "deltak" => Gadget::DeltaK { m, k },
                    "deltakp" => Gadget::DeltaKPrime { m, k },
                    _ => Gadget::DeltaKDoublePrime { m, k },
                })
            }
            "delta3eq" => Expr::Gadget(Gadget::Delta3Eq),
            "delta3sharp" => Expr::Gadget(Gadget::Delta3Sharp),
            "deltathree" => {
                self.expect(Tok::Open, "'('")?;
                let left = self.int()?;
                self.expect(Tok::Comma, "','")?;
                let right = self.int()?;
                self.expect(Tok::Comma, "','")?;
                let sharp = match self.peek() {
                    Some(Tok::Ident(s)) if s == "eq" || s == "sharp" => s == "sharp",
                    _ => {
                        let (s, e) = self.here();
                        return Err(syntax(
                            format!("expected 'eq' or 'sharp', found {}", self.describe()),
                            s,
                            e,
                        ));
                    }
                };
                self.pos += 1;
                self.expect(Tok::Close, "')'")?;
                Expr::Gadget(Gadget::DeltaThree { left, right, sharp })
            }
            "join" => {
                let (a, b) = self.two(true)?;
                Expr::Join(a, b)
            }
            "prod" => {
                let (a, b) = self.two(false)?;
                Expr::Prod(a, b)
            }
            "pretensor" => {
                let (a, b) = self.two(false)?;
                Expr::Pretensor(a, b)
            }
            "tensor" => {
                let (a, b) = self.two(false)?;
                Expr::Tensor(a, b)
            }
            "op" => {
                self.expect(Tok::Open, "'('")?;
                let a = self.operand(false)?;
                self.expect(Tok::Close, "')'")?;
                Expr::Op(a)
            }
            "union" => {
                self.expect(Tok::Open, "'('")?;
                let left = self.operand(false)?;
                self.expect(Tok::Comma, "','")?;
                let right = self.operand(false)?;
                self.expect(Tok::At, "'@'")?;
                let ambient = self.operand(false)?;
                self.expect(Tok::Close, "')'")?;
                Expr::Union {
                    left,
                    right,
                    ambient,
                }
            }
            other => {
                return Err(syntax(format!("unknown constructor '{other}'"), start, end));
            }
        };
        if let Expr::Gadget(g) = &e {
            check_range(g, in_join).map_err(|message| ParseError {
                kind: ErrorKind::Range,
                message,
                start,
                end: self.end_of_previous(),
            })?;
        }
        Ok(e)
    }
}

fn check_range(g: &Gadget, in_join: bool) -> Result<(), String> {
    if let Gadget::Delta(-1) = g {
        return if in_join {
            Ok(())
        } else {
            Err("delta -1 is only allowed as a join operand".into())
        };
    }
    let low = match *g {
        Gadget::Delta(m) | Gadget::DeltaT(m) | Gadget::Boundary(m) => m < 0,
        _ => false,
    };
    if low {
        return Err("dimension must be at least 0".into());
    }
    gadget(g).map(|_| ()).map_err(|e| e.to_string())
}

/// Parses one expression; whitespace between tokens is ignored.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        len: text.len(),
    };
    let e = p.expr(false)?;
    if p.pos < p.toks.len() {
        let (s, _) = p.here();
        return Err(syntax(
            format!("unexpected {} after the expression", p.describe()),
            s,
            text.len(),
        ));
    }
    Ok(e)
}

/// Builds the marked object an expression denotes.
pub fn eval(e: &Expr) -> msset::Result<MarkedSSet> {
    Ok(match e {
        Expr::Gadget(g) => gadget(g)?,
        Expr::Join(a, b) => join_marked(&eval(a)?, &eval(b)?),
        Expr::Prod(a, b) => product_marked(&eval(a)?, &eval(b)?),
        Expr::Pretensor(a, b) => pretensor(&eval(a)?, &eval(b)?),
        Expr::Tensor(a, b) => tensor(&eval(a)?, &eval(b)?),
        Expr::Op(a) => opposite_marked(&eval(a)?),
        Expr::Union {
            left,
            right,
            ambient,
        } => union(&eval(left)?, &eval(right)?, &eval(ambient)?)?,
    })
}

/// The union of two subobjects of `ambient`, whose cells are matched with
/// ambient cells by label. A cell is marked if it is marked in an operand.
fn union(a: &MarkedSSet, b: &MarkedSSet, ambient: &MarkedSSet) -> msset::Result<MarkedSSet> {
    let amb = &ambient.underlying;
    let by_label: HashMap<&str, usize> = (0..amb.len()).map(|c| (amb.label(c), c)).collect();
    let mut cells = CellSet::new();
    let mut marks = Vec::new();
    for x in [a, b] {
        let mut ids = Vec::with_capacity(x.len());
        for c in 0..x.len() {
            let label = x.underlying.label(c);
            let Some(&id) = by_label.get(label) else {
                return Err(msset::Error::NotInclusion(format!(
                    "cell {label} is not a cell of the ambient"
                )));
            };
            if amb.dim(id) != x.underlying.dim(c) {
                return Err(msset::Error::NotInclusion(format!(
                    "cell {label} has a different dimension in the ambient"
                )));
            }
            ids.push(id);
        }
        for c in 0..x.len() {
            for (i, f) in x.underlying.cell(c).faces.iter().enumerate() {
                let want = amb.face(&amb.cell_simplex(ids[c]), i);
                if want.base != ids[f.base] || want.degen != f.degen {
                    return Err(msset::Error::NotInclusion(format!(
                        "face {i} of {} differs from the ambient",
                        x.underlying.label(c)
                    )));
                }
            }
            if x.is_cell_marked(c) {
                marks.push(ids[c]);
            }
            cells.insert(ids[c]);
        }
    }
    let (sub, inclusion) = amb.realize(&cells)?;
    let renumber: HashMap<usize, usize> = inclusion
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let marked: CellSet = marks.iter().map(|m| renumber[m]).collect();
    MarkedSSet::new(std::sync::Arc::new(sub), &marked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_grammar_example() {
        let e = parse("tensor(join(delta 0, delta3eq), delta 2)").unwrap();
        let want = Expr::Tensor(
            Box::new(Expr::Join(
                Box::new(Expr::Gadget(Gadget::Delta(0))),
                Box::new(Expr::Gadget(Gadget::Delta3Eq)),
            )),
            Box::new(Expr::Gadget(Gadget::Delta(2))),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn horn_range_error() {
        let err = parse("horn(2,5)").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Range);
        assert!(err.message.contains("0 <= k <= m"), "{}", err.message);
        assert_eq!((err.start, err.end), (0, 9));
    }

    #[test]
    fn syntax_errors_point_at_the_token() {
        let err = parse("join(delta 1 delta 2)").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        assert_eq!((err.start, err.end), (13, 18));
        assert!(parse("prod(delta 1, delta 1) x").is_err());
        assert!(parse("frob(1)").is_err());
    }

    #[test]
    fn negative_delta_only_in_joins() {
        assert!(parse("join(delta -1, delta 2)").is_ok());
        assert_eq!(parse("delta -1").unwrap_err().kind, ErrorKind::Range);
        assert_eq!(
            parse("prod(delta -1, delta 1)").unwrap_err().kind,
            ErrorKind::Range
        );
    }

    #[test]
    fn spacing_and_parentheses_are_normalized() {
        let e = parse("  JOIN ( delta(1) ,deltathree( -1 , 0 , sharp ))").unwrap();
        assert_eq!(print(&e), "join(delta 1, deltathree(-1,0,sharp))");
        assert_eq!(parse(&print(&e)).unwrap(), e);
    }

    #[test]
    fn union_of_horn_faces() {
        let e = parse("union(horn(2,0), horn(2,2) @ delta 2)").unwrap();
        let u = eval(&e).unwrap();
        assert_eq!(u.underlying.counts(), vec![3, 3]);
        assert!(eval(&parse("union(delta 1, delta 3 @ delta 2)").unwrap()).is_err());
    }
}
