//! Catcode-aware tokenizer for math-mode input.

use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    ControlWord,
    ControlSymbol,
    Char,
    BeginGroup,
    EndGroup,
    AlignTab,
    Superscript,
    Subscript,
    MathShift,
    /// The `@`-ligature forms active in math mode; `text` holds the
    /// discriminating character (`>` `<` `A` `V` `=` `|` `,` `!` `.`)
    /// or a control-sequence name for the `@\vert` form.
    AtLigature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn is_control(&self, name: &str) -> bool {
        matches!(self.kind, TokenKind::ControlWord | TokenKind::ControlSymbol)
            && self.text == name
    }

    pub fn is_char(&self, c: char) -> bool {
        self.kind == TokenKind::Char && self.text.chars().next() == Some(c)
    }
}

/// Tokenizes one math expression. Spaces vanish (they only terminate
/// control words), `%` comments run to end of line, and a tab becomes an
/// alignment tab (honored only inside matrix bodies downstream).
pub fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;
    while let Some(c) = chars.next() {
        let tok_line = line;
        let tok_col = col;
        let advance = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        advance(c, &mut line, &mut col);
        match c {
            ' ' | '\n' | '\r' => continue,
            '%' => {
                for c in chars.by_ref() {
                    advance(c, &mut line, &mut col);
                    if c == '\n' {
                        break;
                    }
                }
            }
            '\\' => {
                let mut name = String::new();
                while let Some(&next) = chars.peek() {
                    if next.is_ascii_alphabetic() {
                        name.push(next);
                        chars.next();
                        advance(next, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                if name.is_empty() {
                    match chars.next() {
                        Some(sym) => {
                            advance(sym, &mut line, &mut col);
                            tokens.push(Token {
                                kind: TokenKind::ControlSymbol,
                                text: sym.to_string(),
                                line: tok_line,
                                col: tok_col,
                            });
                        }
                        None => {
                            return Err(ParseError::InvalidCharacter {
                                ch: '\\',
                                line: tok_line,
                                col: tok_col,
                            })
                        }
                    }
                } else {
                    // spaces after a control word are consumed
                    while let Some(&next) = chars.peek() {
                        if next == ' ' {
                            chars.next();
                            advance(' ', &mut line, &mut col);
                        } else {
                            break;
                        }
                    }
                    tokens.push(Token {
                        kind: TokenKind::ControlWord,
                        text: name,
                        line: tok_line,
                        col: tok_col,
                    });
                }
            }
            '{' => tokens.push(Token {
                kind: TokenKind::BeginGroup,
                text: "{".into(),
                line: tok_line,
                col: tok_col,
            }),
            '}' => tokens.push(Token {
                kind: TokenKind::EndGroup,
                text: "}".into(),
                line: tok_line,
                col: tok_col,
            }),
            '&' => tokens.push(Token {
                kind: TokenKind::AlignTab,
                text: "&".into(),
                line: tok_line,
                col: tok_col,
            }),
            '\t' => tokens.push(Token {
                kind: TokenKind::AlignTab,
                text: "\t".into(),
                line: tok_line,
                col: tok_col,
            }),
            '^' => tokens.push(Token {
                kind: TokenKind::Superscript,
                text: "^".into(),
                line: tok_line,
                col: tok_col,
            }),
            '_' => tokens.push(Token {
                kind: TokenKind::Subscript,
                text: "_".into(),
                line: tok_line,
                col: tok_col,
            }),
            '$' => tokens.push(Token {
                kind: TokenKind::MathShift,
                text: "$".into(),
                line: tok_line,
                col: tok_col,
            }),
            '@' => {
                let next = chars.peek().copied();
                match next {
                    Some(d @ ('>' | '<' | 'A' | 'V' | '=' | '|' | ',' | '!' | '.')) => {
                        chars.next();
                        advance(d, &mut line, &mut col);
                        tokens.push(Token {
                            kind: TokenKind::AtLigature,
                            text: d.to_string(),
                            line: tok_line,
                            col: tok_col,
                        });
                    }
                    Some('\\') => {
                        chars.next();
                        advance('\\', &mut line, &mut col);
                        let mut name = String::new();
                        while let Some(&n) = chars.peek() {
                            if n.is_ascii_alphabetic() {
                                name.push(n);
                                chars.next();
                                advance(n, &mut line, &mut col);
                            } else {
                                break;
                            }
                        }
                        if name == "vert" {
                            tokens.push(Token {
                                kind: TokenKind::AtLigature,
                                text: "vert".into(),
                                line: tok_line,
                                col: tok_col,
                            });
                        } else {
                            return Err(ParseError::InvalidCharacter {
                                ch: '@',
                                line: tok_line,
                                col: tok_col,
                            });
                        }
                    }
                    _ => {
                        return Err(ParseError::InvalidCharacter {
                            ch: '@',
                            line: tok_line,
                            col: tok_col,
                        })
                    }
                }
            }
            c if c.is_control() => {
                return Err(ParseError::InvalidCharacter {
                    ch: c,
                    line: tok_line,
                    col: tok_col,
                })
            }
            c => tokens.push(Token {
                kind: TokenKind::Char,
                text: c.to_string(),
                line: tok_line,
                col: tok_col,
            }),
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(input: &str) -> Vec<(TokenKind, String)> {
        tokenize(input)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn control_words_eat_spaces() {
        assert_eq!(
            kinds(r"\frac ab"),
            vec![
                (TokenKind::ControlWord, "frac".into()),
                (TokenKind::Char, "a".into()),
                (TokenKind::Char, "b".into()),
            ]
        );
    }

    #[test]
    fn scripts_and_chars() {
        assert_eq!(
            kinds("x_1^2"),
            vec![
                (TokenKind::Char, "x".into()),
                (TokenKind::Subscript, "_".into()),
                (TokenKind::Char, "1".into()),
                (TokenKind::Superscript, "^".into()),
                (TokenKind::Char, "2".into()),
            ]
        );
    }

    #[test]
    fn at_ligatures() {
        let toks = kinds("@>>>");
        assert_eq!(toks[0], (TokenKind::AtLigature, ">".into()));
        assert_eq!(toks[1], (TokenKind::Char, ">".into()));
        assert_eq!(toks[2], (TokenKind::Char, ">".into()));
        assert_eq!(kinds("@,")[0], (TokenKind::AtLigature, ",".into()));
        assert_eq!(kinds(r"@\vert")[0], (TokenKind::AtLigature, "vert".into()));
        assert!(tokenize("@q").is_err());
    }

    #[test]
    fn control_symbols() {
        assert_eq!(
            kinds(r"\,\;x"),
            vec![
                (TokenKind::ControlSymbol, ",".into()),
                (TokenKind::ControlSymbol, ";".into()),
                (TokenKind::Char, "x".into()),
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let toks = tokenize("a % comment\nb").unwrap();
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[1].line, 2);
        assert_eq!(toks[1].col, 1);
    }
}
