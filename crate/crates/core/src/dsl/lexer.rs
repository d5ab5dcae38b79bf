use crate::diag::{DiagCode, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    /// Bare identifiers, numbers, levels and qualified ids.
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    At,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
    pub col: u32,
    pub line_end: u32,
    pub col_end: u32,
}

impl Token {
    pub fn span(&self, file: &str) -> SourceSpan {
        SourceSpan::new(file, self.line, self.col, self.line_end, self.col_end)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Str(_) => "a string".to_string(),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::At => "`@`".to_string(),
            TokenKind::Eof => "end of file".to_string(),
        }
    }
}

pub fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | '/')
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        match c {
            '\r' => {
                // CRLF counts as one line break
                if self.peek() == Some('\n') {
                    self.chars.next();
                }
                self.line += 1;
                self.col = 1;
                Some('\n')
            }
            '\n' => {
                self.line += 1;
                self.col = 1;
                Some('\n')
            }
            _ => {
                self.col += 1;
                Some(c)
            }
        }
    }
}

/// Splits `text` into tokens. Lexical errors are reported and the offending
/// characters skipped, so the returned stream always ends with `Eof`.
pub fn tokenize(text: &str, file: &str, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, col) = (cur.line, cur.col);
        let single = |kind, cur: &Cursor| Token {
            kind,
            line,
            col,
            line_end: cur.line,
            col_end: cur.col,
        };
        match c {
            c if c.is_whitespace() => {
                cur.bump();
            }
            '#' => {
                while let Some(c) = cur.peek() {
                    if c == '\n' || c == '\r' {
                        break;
                    }
                    cur.bump();
                }
            }
            '{' => {
                cur.bump();
                tokens.push(single(TokenKind::LBrace, &cur));
            }
            '}' => {
                cur.bump();
                tokens.push(single(TokenKind::RBrace, &cur));
            }
            '@' => {
                cur.bump();
                tokens.push(single(TokenKind::At, &cur));
            }
            '"' => {
                cur.bump();
                let mut value = String::new();
                let mut closed = false;
                while let Some(c) = cur.peek() {
                    match c {
                        '"' => {
                            cur.bump();
                            closed = true;
                            break;
                        }
                        '\n' | '\r' => break,
                        '\\' => {
                            let (el, ec) = (cur.line, cur.col);
                            cur.bump();
                            match cur.peek() {
                                Some('"') => value.push('"'),
                                Some('\\') => value.push('\\'),
                                Some('n') => value.push('\n'),
                                Some('t') => value.push('\t'),
                                Some('r') => value.push('\r'),
                                other => {
                                    let printable =
                                        matches!(other, Some(c) if c != '\n' && c != '\r');
                                    let end = if printable { ec + 2 } else { ec + 1 };
                                    diags.push(Diagnostic::error(
                                        DiagCode::Parse,
                                        SourceSpan::new(file, el, ec, el, end),
                                        "invalid escape sequence in string",
                                    ));
                                    if !printable {
                                        continue;
                                    }
                                }
                            }
                            cur.bump();
                        }
                        _ => {
                            value.push(c);
                            cur.bump();
                        }
                    }
                }
                if !closed {
                    diags.push(Diagnostic::error(
                        DiagCode::Parse,
                        SourceSpan::new(file, line, col, cur.line, cur.col),
                        "unterminated string literal",
                    ));
                }
                tokens.push(Token {
                    kind: TokenKind::Str(value),
                    line,
                    col,
                    line_end: cur.line,
                    col_end: cur.col,
                });
            }
            c if is_word_char(c) => {
                let mut word = String::new();
                while let Some(c) = cur.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    word.push(c);
                    cur.bump();
                }
                tokens.push(Token {
                    kind: TokenKind::Word(word),
                    line,
                    col,
                    line_end: cur.line,
                    col_end: cur.col,
                });
            }
            other => {
                cur.bump();
                diags.push(Diagnostic::error(
                    DiagCode::Parse,
                    SourceSpan::new(file, line, col, cur.line, cur.col),
                    format!("unexpected character `{}`", other.escape_default()),
                ));
            }
        }
    }

    tokens.push(Token {
        kind: TokenKind::Eof,
        line: cur.line,
        col: cur.col,
        line_end: cur.line,
        col_end: cur.col,
    });
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokenKind> {
        let mut d = Vec::new();
        let toks = tokenize(text, "t", &mut d);
        assert!(d.is_empty(), "{d:?}");
        toks.into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn words_strings_and_symbols() {
        assert_eq!(
            kinds("requires sw-design/arch-patterns @ B2 # trailing\n\"a \\\"q\\\"\" {}"),
            vec![
                TokenKind::Word("requires".into()),
                TokenKind::Word("sw-design/arch-patterns".into()),
                TokenKind::At,
                TokenKind::Word("B2".into()),
                TokenKind::Str("a \"q\"".into()),
                TokenKind::LBrace,
                TokenKind::RBrace,
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn positions_are_one_based_and_newline_agnostic() {
        let mut d = Vec::new();
        let toks = tokenize("a\r\n  bb\rc", "t", &mut d);
        assert_eq!((toks[0].line, toks[0].col, toks[0].col_end), (1, 1, 2));
        assert_eq!((toks[1].line, toks[1].col, toks[1].col_end), (2, 3, 5));
        assert_eq!((toks[2].line, toks[2].col), (3, 1));
    }

    #[test]
    fn columns_count_characters_not_bytes() {
        let mut d = Vec::new();
        let toks = tokenize("\"é\" x", "t", &mut d);
        assert_eq!(toks[1].col, 5);
    }

    #[test]
    fn unterminated_string_is_reported() {
        let mut d = Vec::new();
        tokenize("\"open\nnext", "t", &mut d);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, DiagCode::Parse);
        assert_eq!(d[0].span.line_start, 1);
    }

    #[test]
    fn stray_character_is_reported_and_skipped() {
        let mut d = Vec::new();
        let toks = tokenize("a ; b", "t", &mut d);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].span, SourceSpan::new("t", 1, 3, 1, 4));
        assert_eq!(toks.len(), 3);
    }
}
