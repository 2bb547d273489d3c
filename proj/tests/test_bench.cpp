#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "qbaf/bench.hpp"
#include "qbaf/rng.hpp"
#include "support.hpp"

using namespace qbaf;
using namespace qbaf::bench;

namespace {

// Strips the runtime columns (wall-clock noise) for reproducibility diffs.
std::string stable_csv(const Table& t) {
    std::string out;
    for (size_t c = 0; c < t.header.size(); ++c)
        if (t.header[c].find("runtime") == std::string::npos) out += t.header[c] + ",";
    out += "\n";
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c)
            if (t.header[c].find("runtime") == std::string::npos) out += row[c] + ",";
        out += "\n";
    }
    return out;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("deterministic helpers behave like pure functions") {
    CHECK(splitmix64(42) == splitmix64(42));
    CHECK(splitmix64(42) != splitmix64(43));
    CHECK(instance_seed(7, 0) != instance_seed(7, 1));
    CHECK(instance_seed(7, 3) == instance_seed(7, 3));
    Rng a(5), b(5);
    for (int i = 0; i < 100; ++i) {
        double x = a.uniform01();
        CHECK(x == b.uniform01());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    Rng c(6);
    for (int i = 0; i < 100; ++i) CHECK(c.below(7) < 7);
}

TEST_CASE("gen_tree builds full w-ary trees with child-to-parent edges") {
    Instance inst = gen_tree({2, 5, 11});
    CHECK(inst.q.size() == 63);
    CHECK(inst.q.attacks().size() + inst.q.supports().size() == 62);
    CHECK(inst.topic == "a00");
    CHECK(is_acyclic(inst.q));
    // every non-root argument points at its arithmetic parent
    for (const auto& rel : {inst.q.attacks(), inst.q.supports()})
        for (const auto& [from, to] : rel) CHECK(to == (from - 1) / 2);
    for (double s : inst.q.base_scores().values) {
        CHECK(s >= 0.0);
        CHECK(s < 1.0);
    }

    Instance ternary = gen_tree({3, 2, 11});
    CHECK(ternary.q.size() == 13);
    CHECK(ternary.topic == "a00");

    Instance tiny = gen_tree({2, 1, 11});
    CHECK(tiny.q.size() == 3);
    CHECK(tiny.topic == "a0");

    CHECK_THROWS_AS((void)gen_tree({0, 3, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)gen_tree({4, 30, 1}), std::invalid_argument);
}

TEST_CASE("gen_tree is deterministic per seed") {
    std::string a = serialize_qbaf(gen_tree({2, 4, 99}).q);
    std::string b = serialize_qbaf(gen_tree({2, 4, 99}).q);
    std::string c = serialize_qbaf(gen_tree({2, 4, 100}).q);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("gen_cyclic samples distinct typed relations") {
    Instance inst = gen_cyclic({30, 45, 17});
    CHECK(inst.q.size() == 30);
    CHECK(inst.q.attacks().size() + inst.q.supports().size() == 45);
    CHECK(inst.q.contains(inst.topic));
    std::set<std::pair<uint32_t, uint32_t>> seen;
    for (const auto& rel : {inst.q.attacks(), inst.q.supports()})
        for (const auto& e : rel) {
            CHECK(e.first != e.second);
            CHECK(seen.insert(e).second);  // no duplicates across both lists
        }

    // the two-argument complete case forces both ordered pairs
    Instance full = gen_cyclic({2, 2, 3});
    CHECK(full.q.attacks().size() + full.q.supports().size() == 2);

    CHECK_THROWS_AS((void)gen_cyclic({2, 3, 1}), std::invalid_argument);
    CHECK_THROWS_AS((void)gen_cyclic({0, 0, 1}), std::invalid_argument);

    std::string a = serialize_qbaf(gen_cyclic({10, 10, 5}).q);
    std::string b = serialize_qbaf(gen_cyclic({10, 10, 5}).q);
    CHECK(a == b);
}

TEST_CASE("instance specs carry labels and reseeding") {
    InstanceSpec t = InstanceSpec::of(TreeSpec{2, 5, 7});
    CHECK(t.label() == "tree(w=2,d=5,seed=7)");
    CHECK(t.seed() == 7);
    CHECK(t.with_seed(9).seed() == 9);
    InstanceSpec c = InstanceSpec::of(CyclicSpec{50, 50, 3});
    CHECK(c.label() == "cyclic(n=50,m=50,seed=3)");
    Instance inst = generate(c);
    CHECK(inst.q.size() == 50);
}

TEST_CASE("with_base_scores replaces scores and keeps the structure") {
    Qbaf q = testsupport::loan_qbaf();
    BaseScoreFn tau{{0.0, 0.1, 0.2, 0.3, 0.4}};
    Qbaf q2 = with_base_scores(q, tau);
    CHECK(q2.base_scores() == tau);
    CHECK(q2.attacks() == q.attacks());
    CHECK(q2.supports() == q.supports());
    CHECK(q.base_score("alpha") == 0.5);  // original untouched
    CHECK_THROWS_AS((void)with_base_scores(q, BaseScoreFn{{0.1}}), SchemaError);
}

TEST_CASE("variant table matches the ablation naming") {
    CHECK(variant_from_name("BL").use_polarity == false);
    CHECK(variant_from_name("BL").use_priority == false);
    CHECK(variant_from_name("BL+pri").use_polarity == false);
    CHECK(variant_from_name("BL+pri").use_priority == true);
    CHECK(variant_from_name("BL+pol").use_polarity == true);
    CHECK(variant_from_name("BL+pol").use_priority == false);
    CHECK(variant_from_name("CE-QArg").use_polarity == true);
    CHECK(variant_from_name("CE-QArg").use_priority == true);
    CHECK_THROWS_AS((void)variant_from_name("BL+everything"), std::invalid_argument);
    std::vector<VariantSpec> all = all_variants();
    REQUIRE(all.size() == 4);
    CHECK(all[0].name == "BL");
    CHECK(all[3].name == "CE-QArg");
}

TEST_CASE("effectiveness rows cover spec x variant with sane aggregates") {
    ExperimentConfig cfg;
    cfg.n_instances = 4;
    cfg.variants = {variant_from_name("BL"), variant_from_name("CE-QArg")};
    std::vector<InstanceSpec> specs{InstanceSpec::of(TreeSpec{2, 3, 21}),
                                    InstanceSpec::of(TreeSpec{2, 2, 22})};
    std::vector<EffectivenessRow> rows = run_effectiveness(specs, cfg);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].spec == specs[0].label());
    CHECK(rows[0].variant == "BL");
    CHECK(rows[1].variant == "CE-QArg");
    CHECK(rows[2].spec == specs[1].label());
    for (const EffectivenessRow& row : rows) {
        CHECK(row.n == 4);
        CHECK(row.validity >= 0.0);
        CHECK(row.validity <= 1.0);
        CHECK(row.l1_mean >= row.l2_mean);  // L1 dominates L2 pointwise
        CHECK(row.runtime_mean_s > 0.0);
        CHECK(row.runtime_median_s > 0.0);
    }
    // defaults run all four variants
    ExperimentConfig defaults;
    defaults.n_instances = 2;
    std::vector<EffectivenessRow> all_rows =
        run_effectiveness({InstanceSpec::of(TreeSpec{2, 2, 5})}, defaults);
    REQUIRE(all_rows.size() == 4);
    CHECK(all_rows[1].variant == "BL+pri");
}

TEST_CASE("effectiveness aggregates are reproducible") {
    ExperimentConfig cfg;
    cfg.n_instances = 3;
    cfg.variants = {variant_from_name("CE-QArg")};
    std::vector<InstanceSpec> specs{InstanceSpec::of(TreeSpec{2, 3, 31})};
    Table a = to_table(run_effectiveness(specs, cfg));
    Table b = to_table(run_effectiveness(specs, cfg));
    CHECK(stable_csv(a) == stable_csv(b));
}

TEST_CASE("empty experiments are rejected") {
    ExperimentConfig cfg;
    cfg.n_instances = 0;
    CHECK_THROWS_AS((void)run_effectiveness({InstanceSpec::of(TreeSpec{2, 2, 1})}, cfg),
                    EmptyExperimentError);
    ExperimentConfig ok;
    CHECK_THROWS_AS((void)run_effectiveness({}, ok), EmptyExperimentError);
    CHECK_THROWS_AS((void)run_scalability({}, ok), EmptyExperimentError);
    ExperimentConfig no_grid;
    no_grid.e_grid = {};
    CHECK_THROWS_AS((void)run_robustness(InstanceSpec::of(TreeSpec{2, 2, 1}), no_grid),
                    EmptyExperimentError);
}

TEST_CASE("scalability reports one row per size point") {
    ExperimentConfig cfg;
    cfg.n_instances = 3;
    std::vector<InstanceSpec> specs{InstanceSpec::of(TreeSpec{2, 1, 41}),
                                    InstanceSpec::of(TreeSpec{2, 3, 42}),
                                    InstanceSpec::of(CyclicSpec{12, 12, 43})};
    std::vector<ScalabilityRow> rows = run_scalability(specs, cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].n_args == 3);
    CHECK(rows[1].n_args == 15);
    CHECK(rows[2].n_args == 12);
    for (const ScalabilityRow& row : rows) {
        CHECK(row.n == 3);
        CHECK(row.runtime_mean_s > 0.0);
    }
}

TEST_CASE("robustness reports one row per perturbation magnitude") {
    ExperimentConfig cfg;
    cfg.n_instances = 3;
    cfg.e_grid = {0.0, 1e-4, 1e-1};
    std::vector<RobustnessRow> rows = run_robustness(InstanceSpec::of(TreeSpec{2, 3, 51}), cfg);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].e == 0.0);
    // a zero perturbation changes nothing at all
    CHECK(rows[0].dist_mean == 0.0);
    CHECK(rows[0].strength_diff_mean == 0.0);
    CHECK(rows[0].n_dist > 0);
    for (const RobustnessRow& row : rows) {
        CHECK(row.dist_mean >= 0.0);
        CHECK(row.strength_diff_mean >= 0.0);
        CHECK(row.n_dist <= cfg.n_instances);
        CHECK(row.n_strength <= cfg.n_instances);
    }
    CHECK(rows[2].strength_diff_mean > rows[1].strength_diff_mean);
}

TEST_CASE("csv rendering uses six significant digits and stable headers") {
    CHECK(csv_number(0.1) == "0.1");
    CHECK(csv_number(1.0) == "1");
    CHECK(csv_number(1.0 / 3.0) == "0.333333");
    CHECK(csv_number(1234567.0) == "1.23457e+06");
    CHECK(csv_number(0.0) == "0");

    std::vector<EffectivenessRow> rows{{"spec", "BL", 1.0, 0.5, 0.25, 0.001, 0.0005, 7}};
    Table t = to_table(rows);
    CHECK(t.header ==
          std::vector<std::string>{"spec", "variant", "validity", "l1_mean", "l2_mean",
                                   "runtime_mean_s", "runtime_median_s", "n"});
    std::string text = to_csv(t);
    CHECK(text ==
          "spec,variant,validity,l1_mean,l2_mean,runtime_mean_s,runtime_median_s,n\n"
          "spec,BL,1,0.5,0.25,0.001,0.0005,7\n");

    Table empty{t.header, {}};
    CHECK(to_csv(empty) ==
          "spec,variant,validity,l1_mean,l2_mean,runtime_mean_s,runtime_median_s,n\n");

    std::vector<ScalabilityRow> srows{{"s", 63, 1.0, 0.1, 0.1, 5}};
    CHECK(to_table(srows).header ==
          std::vector<std::string>{"spec", "n_args", "validity", "runtime_mean_s",
                                   "runtime_median_s", "n"});
    std::vector<RobustnessRow> rrows{{1e-4, 0.1, 0.01, 20, 20}};
    CHECK(to_table(rrows).header ==
          std::vector<std::string>{"e", "dist_mean", "strength_diff_mean", "n_dist",
                                   "n_strength"});
}

TEST_CASE("write_csv round trips through the filesystem") {
    Table t{{"a", "b"}, {{"1", "2"}, {"3", "4"}}};
    std::string path =
        (std::filesystem::temp_directory_path() / "qbaf_bench_test.csv").string();
    write_csv(t, path);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == "a,b\n1,2\n3,4\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_csv(t, "/nonexistent-dir/x.csv"), IoError);
}

}  // TEST_SUITE
