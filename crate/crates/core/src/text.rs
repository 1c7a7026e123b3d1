//! Line-oriented helpers shared by the polynomial, instance and template
//! file formats.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

/// Cursor over non-empty, non-comment (`#`) lines.
pub struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Lines<'a> {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    pub fn error(&self, message: impl Into<String>) -> FormatError {
        FormatError {
            line: self.last,
            message: message.into(),
        }
    }

    /// Next meaningful line, split on whitespace.
    pub fn next_fields(&mut self) -> Result<Vec<&'a str>, FormatError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Ok(line.split_whitespace().collect());
        }
        Err(FormatError {
            line: self.last,
            message: "unexpected end of input".into(),
        })
    }

    /// Next line, which must start with `keyword`; returns the remaining fields.
    pub fn expect(&mut self, keyword: &str) -> Result<Vec<&'a str>, FormatError> {
        let mut fields = self.next_fields()?;
        if fields.first() != Some(&keyword) {
            return Err(self.error(format!(
                "expected `{keyword}`, found `{}`",
                fields.join(" ")
            )));
        }
        fields.remove(0);
        Ok(fields)
    }

    pub fn expect_count(&mut self, keyword: &str) -> Result<usize, FormatError> {
        let f = self.expect(keyword)?;
        match f.as_slice() {
            [n] => self.parse(n),
            _ => Err(self.error(format!("`{keyword}` takes exactly one count"))),
        }
    }

    pub fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T, FormatError> {
        s.parse()
            .map_err(|_| self.error(format!("cannot parse {s:?}")))
    }

    /// Asserts that only blank or comment lines remain.
    pub fn finish(&mut self) -> Result<(), FormatError> {
        match self.next_fields() {
            Ok(f) => Err(self.error(format!("trailing content `{}`", f.join(" ")))),
            Err(_) => Ok(()),
        }
    }
}
