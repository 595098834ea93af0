//! Reader for the canonical polynomial text form.
//!
//! Accepts the printed form (`3/2*x1^2*x2^1 + -1/1`) and the usual looser
//! spellings: bare integers, `-` separators, omitted coefficients and `^1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Monomial, PolyError, Polynomial};

pub fn parse_polynomial(text: &str, variables: &[String]) -> Result<Polynomial, PolyError> {
    let mut p = Polynomial::zero(variables.to_vec());
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut sign = BigRational::one();
    let mut expect_term = true;
    let mut saw_term = false;

    let err = |column: usize, message: &str| PolyError::Parse {
        column: column + 1,
        message: message.to_string(),
    };

    while pos < chars.len() {
        let c = chars[pos];
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        if c == '+' || c == '-' {
            if c == '-' {
                sign = -sign;
            }
            expect_term = true;
            pos += 1;
            continue;
        }
        if !expect_term {
            return Err(err(pos, "expected `+` or `-` between terms"));
        }
        let (coeff, exps, next) = parse_term(&chars, pos, variables)?;
        p.add_term(Monomial(exps), coeff * &sign);
        sign = BigRational::one();
        expect_term = false;
        saw_term = true;
        pos = next;
    }
    if expect_term && saw_term {
        return Err(err(chars.len(), "dangling sign at end of input"));
    }
    if !saw_term {
        return Err(err(0, "empty polynomial"));
    }
    Ok(p)
}

fn parse_term(
    chars: &[char],
    mut pos: usize,
    variables: &[String],
) -> Result<(BigRational, Vec<u32>, usize), PolyError> {
    let mut coeff = BigRational::one();
    let mut exps = vec![0u32; variables.len()];
    loop {
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        let start = pos;
        let Some(&c) = chars.get(pos) else {
            return Err(PolyError::Parse {
                column: pos + 1,
                message: "expected factor".into(),
            });
        };
        if c == '-' {
            // sign inside a term, as in `+ -3/2*x^2`
            coeff = -coeff;
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let (num, next) = read_int(chars, pos);
            pos = next;
            let mut value = BigRational::from_integer(num);
            if chars.get(pos) == Some(&'/') {
                let (den, next) = read_int(chars, pos + 1);
                if next == pos + 1 || den.is_zero() {
                    return Err(PolyError::Parse {
                        column: pos + 2,
                        message: "bad denominator".into(),
                    });
                }
                value = BigRational::new(value.to_integer(), den);
                pos = next;
            }
            coeff *= value;
        } else if c.is_alphabetic() || c == '_' {
            while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            let name: String = chars[start..pos].iter().collect();
            let idx = variables.iter().position(|v| *v == name).ok_or(PolyError::Parse {
                column: start + 1,
                message: format!("unknown variable `{name}`"),
            })?;
            let mut e = 1u32;
            if chars.get(pos) == Some(&'^') {
                let (k, next) = read_int(chars, pos + 1);
                if next == pos + 1 {
                    return Err(PolyError::Parse {
                        column: pos + 2,
                        message: "missing exponent".into(),
                    });
                }
                e = u32::try_from(k).map_err(|_| PolyError::Parse {
                    column: pos + 2,
                    message: "exponent too large".into(),
                })?;
                pos = next;
            }
            exps[idx] += e;
        } else {
            return Err(PolyError::Parse {
                column: pos + 1,
                message: format!("unexpected character `{c}`"),
            });
        }
        while pos < chars.len() && chars[pos].is_whitespace() {
            pos += 1;
        }
        if chars.get(pos) == Some(&'*') {
            pos += 1;
        } else {
            return Ok((coeff, exps, pos));
        }
    }
}

fn read_int(chars: &[char], mut pos: usize) -> (BigInt, usize) {
    let start = pos;
    while pos < chars.len() && chars[pos].is_ascii_digit() {
        pos += 1;
    }
    let s: String = chars[start..pos].iter().collect();
    (s.parse().unwrap_or_default(), pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        vec!["t".into(), "x".into()]
    }

    #[test]
    fn reads_canonical_output() {
        let text = "1/2*t^1*x^1 + 1/1*x^2 + -3/1";
        let p = parse_polynomial(text, &vars()).unwrap();
        assert_eq!(p.to_string(), text);
    }

    #[test]
    fn reads_loose_forms() {
        let p = parse_polynomial("x^4 + t^2*x^2 - 6", &vars()).unwrap();
        assert_eq!(p.to_string(), "1/1*t^2*x^2 + 1/1*x^4 + -6/1");
        let p = parse_polynomial("-x*x + 2 x", &vars());
        assert!(p.is_err());
        let p = parse_polynomial("-x*x + 2*x", &vars()).unwrap();
        assert_eq!(p.to_string(), "-1/1*x^2 + 2/1*x^1");
    }

    #[test]
    fn reports_columns() {
        match parse_polynomial("x + y", &vars()) {
            Err(PolyError::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("", &vars()).is_err());
        assert!(parse_polynomial("x +", &vars()).is_err());
        assert!(parse_polynomial("1/0", &vars()).is_err());
    }
}
