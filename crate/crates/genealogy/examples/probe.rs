fn main() {
    let config = genealogy::synth::GeneratorConfig {
        seed: 31,
        scholars: 4000,
        second_advisor_prob: 0.08,
        date_violation_rate: 0.0032,
        ..genealogy::synth::GeneratorConfig::default()
    };
    let (graph, truth) = genealogy::synth::generate(&config).unwrap();
    println!("scholars={} edges={} injected={}", graph.len(), graph.edge_count(), truth.injected_violations.len());
}
