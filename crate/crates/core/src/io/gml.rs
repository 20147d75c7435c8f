use crate::error::Result;
use crate::network::Network;

use super::parse_error;

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Number(f64),
    Text(String),
    List(Vec<(String, Value)>),
}

impl Value {
    fn as_text(&self) -> Option<String> {
        match self {
            Value::Number(n) => Some(n.to_string()),
            Value::Text(s) => Some(s.clone()),
            Value::List(_) => None,
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Word(String),
    Quoted(String),
    Open,
    Close,
}

fn tokenize(text: &str, source: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1;
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '[' => {
                chars.next();
                out.push((line, Token::Open));
            }
            ']' => {
                chars.next();
                out.push((line, Token::Close));
            }
            '"' => {
                chars.next();
                let start = line;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(c) => {
                            if c == '\n' {
                                line += 1;
                            }
                            s.push(c);
                        }
                        None => return Err(parse_error(source, start, "unterminated string")),
                    }
                }
                out.push((start, Token::Quoted(s)));
            }
            _ => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| !c.is_whitespace() && c != '[' && c != ']') {
                    s.push(chars.next().unwrap());
                }
                out.push((line, Token::Word(s)));
            }
        }
    }
    Ok(out)
}

fn parse_list(tokens: &[(usize, Token)], pos: &mut usize, source: &str, nested: bool) -> Result<Vec<(String, Value)>> {
    let mut items = Vec::new();
    while *pos < tokens.len() {
        let (line, tok) = &tokens[*pos];
        *pos += 1;
        let key = match tok {
            Token::Close if nested => return Ok(items),
            Token::Word(w) => w.clone(),
            _ => return Err(parse_error(source, *line, "expected a key")),
        };
        let Some((vline, vtok)) = tokens.get(*pos) else {
            return Err(parse_error(source, *line, format!("missing value for {key}")));
        };
        *pos += 1;
        let value = match vtok {
            Token::Open => Value::List(parse_list(tokens, pos, source, true)?),
            Token::Quoted(s) => Value::Text(s.clone()),
            Token::Word(w) => w.parse::<f64>().map(Value::Number).unwrap_or_else(|_| Value::Text(w.clone())),
            Token::Close => return Err(parse_error(source, *vline, format!("missing value for {key}"))),
        };
        items.push((key, value));
    }
    if nested {
        return Err(parse_error(source, tokens.last().map_or(0, |t| t.0), "unbalanced brackets"));
    }
    Ok(items)
}

fn field<'a>(items: &'a [(String, Value)], key: &str) -> Option<&'a Value> {
    items.iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

/// Reads the `graph [ node [...] edge [...] ]` subset of GML. Node `label`s
/// (or ids) become node names and node `value`s become metadata; an edge
/// `value` or `weight` is its weight.
pub fn parse_gml(text: &str, source: &str) -> Result<Network> {
    let tokens = tokenize(text, source)?;
    let mut pos = 0;
    let top = parse_list(&tokens, &mut pos, source, false)?;
    let Some(Value::List(graph)) = field(&top, "graph") else {
        return Err(parse_error(source, 0, "no graph block"));
    };
    let mut ids: Vec<String> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut values: Vec<Option<String>> = Vec::new();
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    for (key, value) in graph {
        let Value::List(items) = value else { continue };
        match key.as_str() {
            "node" => {
                let id = field(items, "id")
                    .and_then(Value::as_text)
                    .ok_or_else(|| parse_error(source, 0, "node without id"))?;
                names.push(field(items, "label").and_then(Value::as_text).unwrap_or_else(|| id.clone()));
                values.push(field(items, "value").and_then(Value::as_text));
                ids.push(id);
            }
            "edge" => {
                let end = |k: &str| {
                    field(items, k)
                        .and_then(Value::as_text)
                        .ok_or_else(|| parse_error(source, 0, format!("edge without {k}")))
                };
                let w = match field(items, "weight").or_else(|| field(items, "value")) {
                    Some(Value::Number(w)) => *w,
                    _ => 1.0,
                };
                edges.push((end("source")?, end("target")?, w));
            }
            _ => {}
        }
    }
    let index: std::collections::HashMap<&str, usize> = ids.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut numbered = Vec::with_capacity(edges.len());
    for (s, t, w) in &edges {
        let (Some(&i), Some(&j)) = (index.get(s.as_str()), index.get(t.as_str())) else {
            return Err(parse_error(source, 0, format!("edge {s} -- {t} references an unknown node")));
        };
        numbered.push((i, j, *w));
    }
    let mut net = Network::with_node_count(ids.len(), numbered)?.with_node_names(names)?;
    if values.iter().all(Option::is_some) && !values.is_empty() {
        net = net.with_metadata(values.into_iter().flatten().collect())?;
    }
    Ok(net)
}
