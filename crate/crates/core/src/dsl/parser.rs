use num_complex::Complex64;

use super::ast::*;
use super::lexer::{Token, TokenKind};
use super::{Diagnostic, Pos};

/// Parse result: the AST is returned even when diagnostics were produced,
/// holding whatever statements parsed cleanly.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub ast: Ast,
    pub diagnostics: Vec<Diagnostic>,
}

struct Parser<'a> {
    tokens: &'a [Token],
    at: usize,
    end: Pos,
    diagnostics: Vec<Diagnostic>,
}

type PResult<T> = Result<T, ()>;

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Ident(s) => format!("'{s}'"),
        TokenKind::Number(v) => format!("number {v}"),
        TokenKind::Imag(v) => format!("imaginary number {v}i"),
        TokenKind::Ket(l) => format!("ket |{l}>"),
        TokenKind::Arrow => "'->'".into(),
        TokenKind::LBrace => "'{'".into(),
        TokenKind::RBrace => "'}'".into(),
        TokenKind::LParen => "'('".into(),
        TokenKind::RParen => "')'".into(),
        TokenKind::Semi => "';'".into(),
        TokenKind::Comma => "','".into(),
        TokenKind::Eq => "'='".into(),
        TokenKind::Plus => "'+'".into(),
        TokenKind::Minus => "'-'".into(),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.at)
    }

    fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn pos(&self) -> Pos {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.at);
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&mut self, pos: Pos, message: impl Into<String>) -> PResult<T> {
        self.diagnostics.push(Diagnostic::error(pos, message));
        Err(())
    }

    fn unexpected<T>(&mut self, wanted: &str) -> PResult<T> {
        let pos = self.pos();
        let found = match self.peek_kind() {
            Some(k) => describe(k),
            None => "end of input".into(),
        };
        self.error(pos, format!("expected {wanted}, found {found}"))
    }

    fn expect(&mut self, kind: TokenKind, wanted: &str) -> PResult<Pos> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.at += 1;
                Ok(t.pos)
            }
            _ => self.unexpected(wanted),
        }
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek_kind(), Some(TokenKind::Ident(s)) if s == word)
    }

    fn expect_ident(&mut self, word: &str) -> PResult<Pos> {
        if self.at_ident(word) {
            Ok(self.bump().expect("peeked").pos)
        } else {
            self.unexpected(&format!("'{word}'"))
        }
    }

    fn ident(&mut self, wanted: &str) -> PResult<(String, Pos)> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(s),
                pos,
            }) => {
                self.at += 1;
                Ok((s.clone(), *pos))
            }
            _ => self.unexpected(wanted),
        }
    }

    /// Skips to just past the next `;`, or up to (not past) the next `}`.
    fn recover_statement(&mut self) {
        while let Some(k) = self.peek_kind() {
            match k {
                TokenKind::Semi => {
                    self.at += 1;
                    return;
                }
                TokenKind::RBrace => return,
                _ => self.at += 1,
            }
        }
    }

    fn file(&mut self) -> Ast {
        let mut machines = Vec::new();
        while self.peek().is_some() {
            if self.at_ident("machine") {
                if let Some(m) = self.machine() {
                    machines.push(m);
                }
            } else {
                let _ = self.unexpected::<()>("'machine'");
                self.at += 1;
                while self.peek().is_some() && !self.at_ident("machine") {
                    self.at += 1;
                }
            }
        }
        if machines.is_empty() && self.diagnostics.is_empty() {
            self.diagnostics
                .push(Diagnostic::error(self.end, "no machine declaration found"));
        }
        Ast { machines }
    }

    fn machine(&mut self) -> Option<MachineDecl> {
        let start = self.expect_ident("machine").ok()?;
        let (name, pos) = match self.ident("machine name") {
            Ok(v) => v,
            Err(()) => (String::new(), start),
        };
        if self.expect(TokenKind::LBrace, "'{'").is_err() {
            while self.peek().is_some() && !self.at_ident("machine") {
                self.at += 1;
            }
            return None;
        }
        let mut statements = Vec::new();
        loop {
            match self.peek_kind() {
                None => {
                    let _ = self.unexpected::<()>("'}'");
                    break;
                }
                Some(TokenKind::RBrace) => {
                    self.at += 1;
                    break;
                }
                Some(TokenKind::Ident(w)) if w == "machine" => {
                    let _ = self.unexpected::<()>("'}'");
                    break;
                }
                _ => match self.statement() {
                    Ok(s) => statements.push(s),
                    Err(()) => self.recover_statement(),
                },
            }
        }
        let decl = MachineDecl { name, pos, statements };
        self.validate(&decl);
        Some(decl)
    }

    fn validate(&mut self, m: &MachineDecl) {
        let mut seen_rule = [false, false];
        let mut counts = [0usize; 5];
        for s in &m.statements {
            let slot = match &s.kind {
                StatementKind::Rule { input, .. } => {
                    let i = *input as usize;
                    if seen_rule[i] {
                        self.diagnostics
                            .push(Diagnostic::error(s.pos, format!("duplicate basis rule for |{input}>")));
                    }
                    seen_rule[i] = true;
                    continue;
                }
                StatementKind::Extend(_) => 0,
                StatementKind::Require(_) => 1,
                StatementKind::Candidate(_) => 2,
                StatementKind::Blank(_) => 3,
                StatementKind::Ancilla(_) => 4,
            };
            counts[slot] += 1;
            if counts[slot] == 2 {
                let what = ["extension", "requirement", "candidate", "blank", "ancilla"][slot];
                self.diagnostics
                    .push(Diagnostic::error(s.pos, format!("duplicate {what} clause")));
            }
        }
        if counts[0] == 0 {
            self.diagnostics
                .push(Diagnostic::error(m.pos, "machine must declare extension"));
        }
        if counts[1] == 0 {
            self.diagnostics
                .push(Diagnostic::error(m.pos, "machine must declare a requirement"));
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let pos = self.pos();
        let (word, _) = self.ident("a statement ('on', 'extend', 'require', 'candidate', 'blank' or 'ancilla')")?;
        let kind = match word.as_str() {
            "on" => self.rule()?,
            "extend" => StatementKind::Extend(self.extension()?),
            "require" => StatementKind::Require(self.requirement()?),
            "candidate" => StatementKind::Candidate(self.candidate()?),
            "blank" => StatementKind::Blank(self.ket_expr()?),
            "ancilla" => StatementKind::Ancilla(self.ket_expr()?),
            other => return self.error(pos, format!("unknown statement '{other}'")),
        };
        self.expect(TokenKind::Semi, "';'")?;
        Ok(Statement { pos, kind })
    }

    fn rule(&mut self) -> PResult<StatementKind> {
        let pos = self.pos();
        let input = match self.bump().map(|t| &t.kind) {
            Some(TokenKind::Ket(l)) if l == "0" => 0,
            Some(TokenKind::Ket(l)) if l == "1" => 1,
            Some(TokenKind::Ket(_)) => return self.error(pos, "basis rule input must be |0> or |1>"),
            _ => {
                self.at = self.at.saturating_sub(1);
                return self.unexpected("basis ket |0> or |1>");
            }
        };
        self.expect(TokenKind::Arrow, "'->'")?;
        let output = self.ket_expr()?;
        Ok(StatementKind::Rule { input, output })
    }

    fn lambda_arg(&mut self) -> PResult<f64> {
        self.expect_ident("lambda")?;
        self.expect(TokenKind::Eq, "'='")?;
        let pos = self.pos();
        let v = self.real()?;
        if !(0.0..=1.0).contains(&v) {
            return self.error(pos, format!("lambda {v} outside [0, 1]"));
        }
        Ok(v)
    }

    fn extension(&mut self) -> PResult<ExtensionClause> {
        let (word, pos) = self.ident("'linear', 'antilinear' or 'hybrid'")?;
        match word.as_str() {
            "linear" => Ok(ExtensionClause::Linear),
            "antilinear" => Ok(ExtensionClause::Antilinear),
            "hybrid" => {
                self.expect(TokenKind::LParen, "'('")?;
                let lambda = self.lambda_arg()?;
                let mut anti = None;
                if self.peek_kind() == Some(&TokenKind::Comma) {
                    self.at += 1;
                    self.expect_ident("anti")?;
                    self.expect(TokenKind::Eq, "'='")?;
                    let (kind, kpos) = self.ident("'complement' or 'conjugate'")?;
                    anti = Some(match kind.as_str() {
                        "complement" => AntiKind::Complement,
                        "conjugate" => AntiKind::Conjugate,
                        _ => return self.error(kpos, format!("unknown antiunitary '{kind}'")),
                    });
                }
                self.expect(TokenKind::RParen, "')'")?;
                Ok(ExtensionClause::Hybrid { lambda, anti })
            }
            _ => self.error(pos, format!("unknown extension '{word}'")),
        }
    }

    fn requirement(&mut self) -> PResult<RequirementClause> {
        let (word, pos) = self.ident("'universal' or 'basis'")?;
        match word.as_str() {
            "basis" => Ok(RequirementClause::Basis),
            "universal" => {
                self.expect_ident("on")?;
                let set = self.set_clause()?;
                self.expect_ident("target")?;
                let target = self.target()?;
                Ok(RequirementClause::Universal { set, target })
            }
            _ => self.error(pos, format!("unknown requirement '{word}'")),
        }
    }

    fn set_clause(&mut self) -> PResult<SetClause> {
        let (word, pos) = self.ident("'bloch', 'polar', 'equatorial' or 'list'")?;
        match word.as_str() {
            "bloch" => Ok(SetClause::Bloch),
            "polar" => Ok(SetClause::Polar),
            "equatorial" => Ok(SetClause::Equatorial),
            "list" => {
                self.expect(TokenKind::LParen, "'('")?;
                let mut items = vec![self.ket_expr()?];
                while self.peek_kind() == Some(&TokenKind::Comma) {
                    self.at += 1;
                    items.push(self.ket_expr()?);
                }
                self.expect(TokenKind::RParen, "')'")?;
                Ok(SetClause::List(items))
            }
            _ => self.error(pos, format!("unknown state set '{word}'")),
        }
    }

    fn amplitude_pair(&mut self) -> PResult<(Complex64, Complex64)> {
        self.expect(TokenKind::LParen, "'('")?;
        self.expect_ident("a")?;
        self.expect(TokenKind::Eq, "'='")?;
        let a = self.complex()?;
        self.expect(TokenKind::Comma, "','")?;
        self.expect_ident("b")?;
        self.expect(TokenKind::Eq, "'='")?;
        let b = self.complex()?;
        self.expect(TokenKind::RParen, "')'")?;
        Ok((a, b))
    }

    fn target(&mut self) -> PResult<TargetClause> {
        let (word, pos) = self.ident("a target")?;
        Ok(match word.as_str() {
            "clone" => TargetClause::Clone,
            "complement" => TargetClause::Complement,
            "conjugate" => TargetClause::Conjugate,
            "hybrid" => {
                self.expect(TokenKind::LParen, "'('")?;
                let lambda = self.lambda_arg()?;
                self.expect(TokenKind::RParen, "')'")?;
                TargetClause::Hybrid { lambda }
            }
            "hadamard9" => TargetClause::Hadamard9,
            "hadamard10" => TargetClause::Hadamard10,
            "unequal" => {
                let (a, b) = self.amplitude_pair()?;
                TargetClause::Unequal { a, b }
            }
            "cnot" => TargetClause::Cnot,
            _ => return self.error(pos, format!("unknown target '{word}'")),
        })
    }

    fn candidate(&mut self) -> PResult<CandidateClause> {
        let (word, pos) = self.ident("a gate name (H, HP, HE, CNOT, UG)")?;
        Ok(match word.as_str() {
            "H" => CandidateClause::H,
            "HP" => CandidateClause::HP,
            "HE" => CandidateClause::HE,
            "CNOT" => CandidateClause::Cnot,
            "UG" => {
                let (a, b) = self.amplitude_pair()?;
                CandidateClause::UG { a, b }
            }
            _ => return self.error(pos, format!("unknown gate '{word}'")),
        })
    }

    fn real(&mut self) -> PResult<f64> {
        let negative = match self.peek_kind() {
            Some(TokenKind::Minus) => {
                self.at += 1;
                true
            }
            Some(TokenKind::Plus) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        match self.peek_kind() {
            Some(TokenKind::Number(v)) => {
                self.at += 1;
                Ok(if negative { -v } else { *v })
            }
            _ => self.unexpected("a number"),
        }
    }

    /// Unsigned real or imaginary literal (a bare `i` counts as `1i`).
    fn unsigned_part(&mut self) -> PResult<Complex64> {
        match self.peek_kind() {
            Some(TokenKind::Number(v)) => {
                self.at += 1;
                Ok(Complex64::new(*v, 0.0))
            }
            Some(TokenKind::Imag(v)) => {
                self.at += 1;
                Ok(Complex64::new(0.0, *v))
            }
            Some(TokenKind::Ident(s)) if s == "i" => {
                self.at += 1;
                Ok(Complex64::new(0.0, 1.0))
            }
            _ => self.unexpected("a number"),
        }
    }

    fn sign(&mut self) -> Option<f64> {
        match self.peek_kind() {
            Some(TokenKind::Plus) => {
                self.at += 1;
                Some(1.0)
            }
            Some(TokenKind::Minus) => {
                self.at += 1;
                Some(-1.0)
            }
            _ => None,
        }
    }

    /// `[sign] part [sign part]`, e.g. `-0.5+0.2i`.
    fn complex(&mut self) -> PResult<Complex64> {
        let s = self.sign().unwrap_or(1.0);
        let mut z = self.unsigned_part()? * s;
        if matches!(self.peek_kind(), Some(TokenKind::Plus | TokenKind::Minus))
            && matches!(
                self.tokens.get(self.at + 1).map(|t| &t.kind),
                Some(TokenKind::Number(_) | TokenKind::Imag(_))
            )
        {
            let s2 = self.sign().expect("checked");
            z += self.unsigned_part()? * s2;
        }
        Ok(z)
    }

    fn scalar(&mut self) -> PResult<Option<Complex64>> {
        match self.peek_kind() {
            Some(TokenKind::Number(_) | TokenKind::Imag(_)) => self.unsigned_part().map(Some),
            Some(TokenKind::Ident(s)) if s == "i" => self.unsigned_part().map(Some),
            Some(TokenKind::LParen) => {
                self.at += 1;
                let z = self.complex()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(Some(z))
            }
            _ => Ok(None),
        }
    }

    fn term(&mut self, sign: f64) -> PResult<Term> {
        let coeff = self.scalar()?.unwrap_or(Complex64::new(1.0, 0.0)) * sign;
        let mut kets = Vec::new();
        while let Some(TokenKind::Ket(l)) = self.peek_kind() {
            kets.push(l.clone());
            self.at += 1;
        }
        if kets.is_empty() {
            return self.unexpected("a ket");
        }
        Ok(Term { coeff, kets })
    }

    fn ket_expr(&mut self) -> PResult<KetExpr> {
        let pos = self.pos();
        let first_sign = self.sign().unwrap_or(1.0);
        let mut terms = vec![self.term(first_sign)?];
        while let Some(s) = self.sign() {
            terms.push(self.term(s)?);
        }
        Ok(KetExpr { pos, terms })
    }
}

/// Recursive-descent parse of a token stream. `end` is the position reported
/// for errors at end of input.
pub fn parse(tokens: &[Token], end: Pos) -> Parsed {
    let mut p = Parser {
        tokens,
        at: 0,
        end,
        diagnostics: Vec::new(),
    };
    let ast = p.file();
    Parsed {
        ast,
        diagnostics: p.diagnostics,
    }
}
