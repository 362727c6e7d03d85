use tacdss_core::{FuzzyRule, FuzzySystem};

/// Linguistic rendering of a rule, e.g.
/// `if fuel is half and time is fast ... then score is high`.
pub fn rule_label(system: &FuzzySystem, rule: &FuzzyRule) -> String {
    let terms: Vec<String> = system
        .inputs()
        .iter()
        .zip(&rule.antecedent)
        .map(|(v, &k)| format!("{} is {}", v.name(), v.labels()[k]))
        .collect();
    let out = system.output();
    format!(
        "if {} then {} is {}",
        terms.join(" and "),
        out.name(),
        out.labels()[rule.consequent]
    )
}
