//! Reading named objects from a JSON input document and writing results back.

use nilbracket::doc::{vector_field_json, InputDoc};
use nilbracket::icon::vector_field_bracket;
use nilbracket::GeneratorContext;

const DOC: &str = r#"{
  "schema": 1,
  "fields": {
    "f": [[{"c": [1, 2], "e": [0, 2]}], [{"c": [3, 1], "e": [1, 0]}]],
    "g": [[{"c": [1, 1], "e": [1, 1]}], []]
  }
}"#;

fn main() -> nilbracket::Result<()> {
    let doc = InputDoc::parse(DOC)?;
    let ctx = GeneratorContext::new();
    let b = vector_field_bracket(&ctx, doc.field("f").expect("f"), doc.field("g").expect("g"), 0.0)?;
    println!("{}", serde_json::to_string(&vector_field_json(&b)).expect("json"));

    match InputDoc::parse(r#"{"fields": {"f": [[{"c": [1, 0], "e": [1]}]]}}"#) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
