//! `bijection encode|decode`: maximal networks to words and back.

use std::fs;
use std::io::{self, BufReader, Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;
use treechild::networks::format::{read_text, write_text};
use treechild::words::{network_to_word, read_words, word_to_network};

use crate::args::{Direction, Format};
use crate::report::Table;
use crate::{Ctx, Status};

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text)
}

pub(crate) fn run(ctx: &Ctx, direction: &Direction, out: &mut dyn Write) -> Result<Status> {
    match direction {
        Direction::Encode { input } => {
            let text = read_input(input)?;
            let nets = read_text(BufReader::new(text.as_bytes()))?;
            let mut t = Table::new(&["index", "word", "blocks"]);
            for (i, net) in nets.iter().enumerate() {
                let word = network_to_word(net).with_context(|| format!("network {i}"))?;
                t.push(vec![i.to_string(), word.to_string(), word.display_blocks()]);
            }
            ctx.emit(&t, out)?;
        }
        Direction::Decode { input } => {
            let words = read_words(&read_input(input)?)?;
            let nets = words.iter().map(word_to_network).collect::<treechild::Result<Vec<_>>>()?;
            if ctx.format == Format::Json {
                let values: Vec<Value> = nets.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
                serde_json::to_writer_pretty(&mut *out, &values)?;
                writeln!(out)?;
            } else {
                for net in &nets {
                    write_text(&mut *out, net)?;
                }
            }
        }
    }
    Ok(Status::Pass)
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use treechild::networks::format::to_text;
    use treechild::networks::{canonical_code, samples};
    use treechild::words::component_labeling;

    use crate::testing::*;

    fn temp_with(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn encode_then_decode() {
        let net = samples::maximal();
        let file = temp_with(&to_text(&net));
        let path = file.path().to_str().unwrap();
        let out = stdout_of(&["bijection", "encode", path]);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("index,word,blocks"));
        let word = lines.next().unwrap().split(',').nth(1).unwrap().to_string();

        let words = temp_with(&format!("{word}\n"));
        let decoded = stdout_of(&["bijection", "decode", words.path().to_str().unwrap()]);
        let back = treechild::networks::format::from_text(&decoded).unwrap();
        assert_eq!(
            canonical_code(&back).unwrap(),
            canonical_code(&component_labeling(&net).unwrap()).unwrap()
        );
    }

    #[test]
    fn decode_to_json() {
        let words = temp_with("1 1 1\n# comment\n\n1 1 1 2 2 2\n");
        let out = stdout_of(&["--format", "json", "bijection", "decode", words.path().to_str().unwrap()]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
    }

    #[test]
    fn bad_input_is_an_error() {
        let words = temp_with("1 2 2 1 1 2\n");
        assert!(run_args(&["bijection", "decode", words.path().to_str().unwrap()]).2.is_err());
        let nets = temp_with(&to_text(&samples::tree_child()));
        assert!(run_args(&["bijection", "encode", nets.path().to_str().unwrap()]).2.is_err());
        assert!(run_args(&["bijection", "encode", "/nonexistent/file"]).2.is_err());
    }
}
