use ontoforge::model::{ConceptExpr, Iri, LabelMap};

fn a(s: &str) -> ConceptExpr {
    ConceptExpr::atomic(s)
}

pub fn golden_labels() -> LabelMap {
    [
        ("BioRegulation", "biological regulation"),
        ("negRegulate", "negatively regulates"),
        ("ProlineBiosynProc", "proline biosynthetic process"),
        ("ApoptoticProc", "apoptotic process"),
        ("partOf", "part of"),
        ("Luteolysis", "lutelysis"),
        ("ConcnOf", "concentration of"),
        ("charOf", "characteristic of"),
        ("fucose", "fucose"),
        ("MaterialEnt", "material entity"),
        ("derivesFrom", "derives from"),
        ("TimothyPlant", "timothy plant"),
        ("TrifoliumPratense", "trifolium pratense"),
        ("PlantFoodProd", "plant food product"),
        ("Silage", "silage"),
        ("Apple", "apple (whole or parts)"),
        ("hasPart", "has part"),
        ("ApplePeel", "apple peel"),
    ]
    .into_iter()
    .map(|(k, v)| (Iri::new(k), vec![v.to_string()]))
    .collect()
}

/// Hand-built expressions with their expected phrases.
pub fn golden_cases() -> Vec<(ConceptExpr, &'static str)> {
    vec![
        (
            ConceptExpr::And(vec![a("BioRegulation"), ConceptExpr::exists("negRegulate", a("ProlineBiosynProc"))]),
            "biological regulation that negatively regulates some proline biosynthetic process",
        ),
        (
            ConceptExpr::And(vec![a("ApoptoticProc"), ConceptExpr::exists("partOf", a("Luteolysis"))]),
            "apoptotic process that is part of some lutelysis",
        ),
        (
            ConceptExpr::And(vec![
                a("ConcnOf"),
                ConceptExpr::exists(
                    "charOf",
                    ConceptExpr::And(vec![a("fucose"), ConceptExpr::exists("partOf", a("MaterialEnt"))]),
                ),
            ]),
            "concentration of something that is characteristic of some fucose that is part of some material entity",
        ),
        (
            // named conjuncts keep their relative order ahead of the clause
            ConceptExpr::And(vec![
                ConceptExpr::exists("derivesFrom", ConceptExpr::Or(vec![a("TimothyPlant"), a("TrifoliumPratense")])),
                a("Silage"),
                a("PlantFoodProd"),
            ]),
            "silage and plant food product that derives from some timothy plant or trifolium pratense",
        ),
        (
            ConceptExpr::And(vec![a("Apple"), ConceptExpr::not(ConceptExpr::exists("hasPart", a("ApplePeel")))]),
            "apple (whole or parts) and not something that has part some apple peel",
        ),
    ]
}

/// Whitespace-normalised comparison form.
pub fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
