use super::{CircuitProgram, Instruction, ParseError, Position, MAX_ERRORS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits a line into whitespace-separated tokens with 1-based character
/// columns, stopping at `#`.
fn tokenize(line: &str) -> (Vec<Token<'_>>, usize) {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    let mut end_column = 1;
    for (byte, ch) in line.char_indices() {
        column += 1;
        if ch == '#' {
            if let Some((b, col)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    column: col,
                });
            }
            return (tokens, end_column);
        }
        if ch.is_whitespace() {
            if let Some((b, col)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    column: col,
                });
            }
        } else {
            if start.is_none() {
                start = Some((byte, column));
            }
            end_column = column + 1;
        }
    }
    if let Some((b, col)) = start {
        tokens.push(Token {
            text: &line[b..],
            column: col,
        });
    }
    (tokens, end_column)
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> LineParser<'a> {
    fn error(&self, token: Option<Token<'_>>, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: token.map_or(self.end_column, |t| t.column),
            message: message.into(),
            token: token.map_or(String::new(), |t| t.text.to_string()),
        }
    }

    fn arity(&self, expected: usize) -> std::result::Result<(), ParseError> {
        let keyword = self.tokens[0].text;
        let found = self.tokens.len() - 1;
        if found < expected {
            Err(self.error(
                None,
                format!("`{keyword}` expects {expected} argument(s), found {found}"),
            ))
        } else if found > expected {
            Err(self.error(
                Some(self.tokens[expected + 1]),
                format!("`{keyword}` expects {expected} argument(s), found {found}"),
            ))
        } else {
            Ok(())
        }
    }

    fn number(&self, index: usize) -> std::result::Result<f64, ParseError> {
        let token = self.tokens[index];
        let looks_numeric = token
            .text
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
        match token.text.parse::<f64>() {
            Ok(v) if looks_numeric && v.is_finite() => Ok(v),
            _ => Err(self.error(Some(token), "expected a finite number")),
        }
    }

    fn check(
        &self,
        index: usize,
        value: f64,
        ok: bool,
        message: &str,
    ) -> std::result::Result<f64, ParseError> {
        if ok {
            Ok(value)
        } else {
            Err(self.error(Some(self.tokens[index]), message))
        }
    }

    fn dephasing_angle(&self) -> std::result::Result<f64, ParseError> {
        self.arity(1)?;
        let deg = self.number(1)?;
        self.check(
            1,
            deg,
            (0.0..=45.0).contains(&deg),
            "angle out of range (expected 0 to 45 degrees)",
        )
    }

    fn gap_change(&self) -> std::result::Result<(f64, f64), ParseError> {
        self.arity(2)?;
        let n = self.number(1)?;
        let n = self.check(1, n, n > 1.0, "gap ratio must exceed 1")?;
        let wt = self.number(2)?;
        let wt = self.check(2, wt, wt > 0.0, "ω₀τ must be positive")?;
        Ok((n, wt))
    }

    fn instruction(&self) -> std::result::Result<Instruction, ParseError> {
        let keyword = self.tokens[0];
        Ok(match keyword.text {
            "init" => {
                let Some(kind) = self.tokens.get(1) else {
                    return Err(self.error(None, "`init` expects `rc` or `thermal NUM`"));
                };
                match kind.text {
                    "rc" => {
                        self.arity(1)?;
                        Instruction::InitRc
                    }
                    "thermal" => {
                        self.arity(2)?;
                        let x = self.number(2)?;
                        let x = self.check(2, x, x >= 0.0, "thermal x must be nonnegative")?;
                        Instruction::InitThermal { x }
                    }
                    _ => return Err(self.error(Some(*kind), "expected `rc` or `thermal`")),
                }
            }
            "hwp" | "qwp" | "rot" => {
                self.arity(1)?;
                let deg = self.number(1)?;
                match keyword.text {
                    "hwp" => Instruction::Hwp { deg },
                    "qwp" => Instruction::Qwp { deg },
                    _ => Instruction::Rot { deg },
                }
            }
            "expand" => {
                let (n, omega0_tau_deg) = self.gap_change()?;
                Instruction::Expand { n, omega0_tau_deg }
            }
            "compress" => {
                let (n, omega0_tau_deg) = self.gap_change()?;
                Instruction::Compress { n, omega0_tau_deg }
            }
            "pd" => Instruction::Pd {
                deg: self.dephasing_angle()?,
            },
            "ipd" => Instruction::Ipd {
                deg: self.dephasing_angle()?,
            },
            "tomo" => {
                self.arity(1)?;
                let label = self.tokens[1];
                let mut chars = label.text.chars();
                let valid = chars
                    .next()
                    .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !valid {
                    return Err(self.error(Some(label), "invalid tap label"));
                }
                Instruction::Tomo {
                    label: label.text.to_string(),
                }
            }
            _ => return Err(self.error(Some(keyword), "unknown keyword")),
        })
    }
}

/// Parses circuit source. On failure returns [`Error::Parse`] with up to
/// [`MAX_ERRORS`] diagnostics.
pub fn parse(source: &str) -> Result<CircuitProgram> {
    let mut program = CircuitProgram::default();
    let mut errors = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let (tokens, end_column) = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let parser = LineParser {
            line: idx + 1,
            tokens,
            end_column,
        };
        match parser.instruction() {
            Ok(instruction) => program.push(
                instruction,
                Position {
                    line: parser.line,
                    column: parser.tokens[0].column,
                },
            ),
            Err(e) => {
                errors.push(e);
                if errors.len() == MAX_ERRORS {
                    break;
                }
            }
        }
    }
    if errors.is_empty() {
        Ok(program)
    } else {
        Err(Error::Parse(errors))
    }
}

/// Like [`parse`], for raw bytes that may not be UTF-8.
pub fn parse_bytes(bytes: &[u8]) -> Result<CircuitProgram> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            // The prefix is valid UTF-8 by construction.
            let prefix = std::str::from_utf8(valid).unwrap_or("");
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            let bad_len = e.error_len().unwrap_or(bytes.len() - e.valid_up_to());
            let bad = &bytes[e.valid_up_to()..e.valid_up_to() + bad_len];
            Err(Error::Parse(vec![ParseError {
                line,
                column,
                message: "invalid UTF-8".into(),
                token: bad.iter().map(|b| format!("\\x{b:02x}")).collect(),
            }]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn errors(src: &str) -> Vec<ParseError> {
        match parse(src) {
            Err(Error::Parse(errs)) => errs,
            other => panic!("expected parse errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_program() {
        let p = parse("init rc\npd 22.5\ntomo TC").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.instructions()[1], Instruction::Pd { deg: 22.5 });
        assert_eq!(p.positions()[2], Position { line: 3, column: 1 });
    }

    #[test]
    fn pd_angle_out_of_range() {
        let errs = errors("pd 50");
        assert_eq!(errs.len(), 1);
        assert_eq!((errs[0].line, errs[0].column), (1, 4));
        assert!(errs[0].message.contains("angle out of range"));
        assert_eq!(errs[0].token, "50");
        assert!(parse("ipd -1").is_err());
        assert!(parse("pd 45\nipd 0").is_ok());
    }

    #[test]
    fn errors_are_collected_with_positions() {
        let errs = errors("init rc\nfoo 1\n  hwp\nhwp 1 2\ntomo 9x\nexpand 1 180\ninit thermal nan\n");
        let summary: Vec<(usize, usize, &str)> = errs
            .iter()
            .map(|e| (e.line, e.column, e.token.as_str()))
            .collect();
        assert_eq!(
            summary,
            vec![
                (2, 1, "foo"),
                (3, 6, ""),
                (4, 7, "2"),
                (5, 6, "9x"),
                (6, 8, "1"),
                (7, 14, "nan"),
            ]
        );
    }

    #[test]
    fn error_collection_is_capped() {
        let src = "bogus\n".repeat(25);
        assert_eq!(errors(&src).len(), MAX_ERRORS);
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse("# header\n\n   \ninit thermal 3 # cold\nhwp 45#tight\n").unwrap();
        assert_eq!(
            p.instructions(),
            &[Instruction::InitThermal { x: 3.0 }, Instruction::Hwp { deg: 45.0 }]
        );
        assert_eq!(p.positions()[0].line, 4);
    }

    #[test]
    fn columns_count_characters() {
        let errs = errors("ρ hwp");
        assert_eq!((errs[0].column, errs[0].token.as_str()), (1, "ρ"));
        let errs = errors("hwp θ");
        assert_eq!(errs[0].column, 5);
    }

    #[test]
    fn invalid_utf8_is_reported() {
        let err = parse_bytes(b"init rc\nhwp \xff\n").unwrap_err();
        let Error::Parse(errs) = err else { panic!() };
        assert_eq!((errs[0].line, errs[0].column), (2, 5));
        assert_eq!(errs[0].token, "\\xff");
        assert!(parse_bytes(b"init rc").is_ok());
    }

    #[test]
    fn special_float_spellings_are_rejected() {
        for src in ["hwp inf", "hwp NaN", "hwp infinity", "hwp 1e400"] {
            assert!(parse(src).is_err(), "{src}");
        }
        assert!(parse("hwp -1.5e1").is_ok());
    }
}
