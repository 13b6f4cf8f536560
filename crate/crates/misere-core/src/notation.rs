//! Textual game notation.
//!
//! Grammar:
//! ```text
//! game := atom ('+' atom)*
//! atom := nimber | '{' [game (',' game)*] '}' | atom '#'
//! nimber := decimal digits (the nimber *n)
//! ```
//! `#` is postfix "pack into a singleton": `g# = {g}`. Whitespace is allowed
//! between tokens. Note that adjacency is **not** juxtaposition: `{2##1}` is
//! a parse error (write `{2##,1}`).

use crate::arena::{Arena, GameId};
use crate::error::{Error, Result};

/// Parsed game expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GameExpr {
    Nimber(u32),
    Set(Vec<GameExpr>),
    Sharp(Box<GameExpr>),
    Sum(Box<GameExpr>, Box<GameExpr>),
}

impl std::fmt::Display for GameExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GameExpr::Nimber(n) => write!(f, "{n}"),
            GameExpr::Set(items) => {
                write!(f, "{{")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "}}")
            }
            GameExpr::Sharp(inner) => match inner.as_ref() {
                // Sums need braces before a postfix # anyway, and a sharped
                // sum can only have arisen from explicit braces.
                GameExpr::Sum(..) => write!(f, "{{{inner}}}#"),
                _ => write!(f, "{inner}#"),
            },
            GameExpr::Sum(a, b) => write!(f, "{a}+{b}"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn game(&mut self) -> Result<GameExpr> {
        let mut expr = self.atom()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let rhs = self.atom()?;
            expr = GameExpr::Sum(Box::new(expr), Box::new(rhs));
        }
        Ok(expr)
    }

    fn atom(&mut self) -> Result<GameExpr> {
        let mut expr = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match text.parse::<u32>() {
                    Ok(n) if n <= 1_000_000 => GameExpr::Nimber(n),
                    _ => {
                        self.pos = start;
                        return self.err(format!("nimber '{text}' out of range"));
                    }
                }
            }
            Some(b'{') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(b'}') {
                    self.pos += 1;
                } else {
                    loop {
                        items.push(self.game()?);
                        match self.peek() {
                            Some(b',') => {
                                self.pos += 1;
                            }
                            Some(b'}') => {
                                self.pos += 1;
                                break;
                            }
                            Some(c) if c.is_ascii_digit() || c == b'{' => {
                                return self.err(
                                    "adjacent games are not juxtaposition; \
                                     separate options with ','",
                                );
                            }
                            _ => return self.err("expected ',' or '}'"),
                        }
                    }
                }
                GameExpr::Set(items)
            }
            Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            None => return self.err("unexpected end of input"),
        };
        while self.peek() == Some(b'#') {
            self.pos += 1;
            expr = GameExpr::Sharp(Box::new(expr));
        }
        Ok(expr)
    }
}

/// Parses game notation. Errors carry the byte offset of the failure.
pub fn parse(input: &str) -> Result<GameExpr> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let expr = p.game()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(expr)
}

/// Realizes an expression as an interned form. Sums are taken at the form
/// level (no simplification), so `mate` and friends see the written shape.
pub fn build(arena: &Arena, expr: &GameExpr) -> Result<GameId> {
    Ok(match expr {
        GameExpr::Nimber(n) => arena.nimber(*n),
        GameExpr::Set(items) => {
            let opts: Vec<GameId> = items
                .iter()
                .map(|e| build(arena, e))
                .collect::<Result<_>>()?;
            arena.intern(&opts)?
        }
        GameExpr::Sharp(inner) => {
            let g = build(arena, inner)?;
            arena.intern(&[g])?
        }
        GameExpr::Sum(a, b) => {
            let (ga, gb) = (build(arena, a)?, build(arena, b)?);
            arena.sum_form(ga, gb)
        }
    })
}

/// Renders an interned form back as notation: nimbers as digits, singletons
/// with postfix `#`, other forms as `{...}` with options in the deterministic
/// engine order.
pub fn display(arena: &Arena, g: GameId) -> String {
    if let Some(n) = arena.nimber_value(g) {
        return n.to_string();
    }
    let opts = arena.options(g);
    if opts.len() == 1 {
        return format!("{}#", display(arena, opts[0]));
    }
    // Options are listed in the deterministic census order: birthday first,
    // then lexicographically on option sequences.
    let mut sorted: Vec<GameId> = opts.to_vec();
    sorted.sort_by(|&x, &y| arena.cmp_games(x, y));
    let body: Vec<String> = sorted.iter().map(|&o| display(arena, o)).collect();
    format!("{{{}}}", body.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_basic_forms() {
        assert_eq!(parse("2").unwrap(), GameExpr::Nimber(2));
        assert_eq!(
            parse("2#").unwrap(),
            GameExpr::Sharp(Box::new(GameExpr::Nimber(2)))
        );
        assert_eq!(
            parse("{2##,1}#").unwrap(),
            GameExpr::Sharp(Box::new(GameExpr::Set(vec![
                GameExpr::Sharp(Box::new(GameExpr::Sharp(Box::new(GameExpr::Nimber(2))))),
                GameExpr::Nimber(1),
            ])))
        );
        assert_eq!(parse("{}").unwrap(), GameExpr::Set(vec![]));
        assert!(matches!(
            parse("4 + {2,0}#").unwrap(),
            GameExpr::Sum(_, _)
        ));
    }

    #[test]
    fn rejects_juxtaposition_with_hint() {
        let err = parse("{2##1}#").unwrap_err();
        match err {
            Error::Parse { offset, message } => {
                assert_eq!(offset, 4);
                assert!(message.contains("','"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reports_offsets() {
        match parse("{2,").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("").is_err());
        assert!(parse("2)").is_err());
    }

    #[test]
    fn build_and_display_round_trip() {
        let a = Arena::new();
        let e = parse("{2##,1}#").unwrap();
        let g = build(&a, &e).unwrap();
        assert_eq!(display(&a, g), "{1,2##}#");
        let n = build(&a, &parse("{0,1,2}").unwrap()).unwrap();
        assert_eq!(n, a.nimber(3));
        assert_eq!(display(&a, n), "3");
    }

    #[test]
    fn sum_builds_form_level() {
        let a = Arena::new();
        let g = build(&a, &parse("1+1").unwrap()).unwrap();
        // Form-level *1 + *1 = {*1 + 0, 0 + *1} = {*1}: not the canonical 0.
        assert_eq!(a.options(g).as_ref(), &[a.nimber(1)]);
        assert_eq!(a.canonicalize(g), a.nimber(0));
    }
}
