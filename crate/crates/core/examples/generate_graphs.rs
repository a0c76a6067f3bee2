// Build each graph family, save one as JSON and load it back.

use gape_kit::graph::{csl_graph, cycle_graph, erdos_renyi, string_graph, LabeledGraph};

pub fn run() -> gape_kit::Result<()> {
    let graphs = [
        ("path(6)", string_graph(6)?),
        ("cycle(7)", cycle_graph(7)?),
        ("ER(20, 0.2)", erdos_renyi(20, 0.2, 1)?),
        ("CSL(41, 10)", csl_graph(41, 10)?),
    ];
    for (name, g) in &graphs {
        println!(
            "{name:<12} n={:<3} edges={:<3} directed={:<5} components={}",
            g.n(),
            g.edge_count(),
            g.is_directed(),
            g.component_count()
        );
    }

    let path = std::env::temp_dir().join("gape_kit_example_er.json");
    graphs[2].1.save(&path)?;
    let back = LabeledGraph::load(&path)?;
    assert_eq!(back, graphs[2].1);
    println!("round-tripped {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> gape_kit::Result<()> {
    run()
}
