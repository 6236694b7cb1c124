#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "creol2ta/ta/model.hpp"
#include "doctest.h"

using namespace creol2ta;
using namespace creol2ta::ta;

namespace {

SystemModel one_template_system(Template t) {
    SystemModel sys;
    sys.globals.channels.push_back({"a", {}, false});
    sys.globals.clocks.push_back({"x", 0});
    sys.templates.push_back(std::move(t));
    sys.instances.push_back({"p", sys.templates[0].name, {}});
    return sys;
}

ClockAtom x_atom(Rel r, long bound) {
    return ClockAtom::simple(ClockRef::scalar("x"), r, Expr::int_lit(bound));
}

}  // namespace

TEST_CASE("builder rejects duplicate locations and missing initial") {
    TemplateBuilder b("T");
    b.add_location("l0");
    CHECK_THROWS_AS(b.add_location("l0"), BuildError);
    TemplateBuilder empty("E");
    CHECK_THROWS_AS(empty.finalize(), BuildError);
    TemplateBuilder no_init("N");
    no_init.add_location("l0");
    CHECK_THROWS_AS(no_init.finalize(), BuildError);
}

TEST_CASE("builder rejects dangling edges") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    CHECK_THROWS_AS(b.add_edge(l0, 42), BuildError);
}

TEST_CASE("disjoint guards keep a template deterministic") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    int l1 = b.add_location("l1");
    int l2 = b.add_location("l2");
    b.set_initial(l0);
    Edge& e1 = b.add_edge(l0, l1);
    e1.sync = Sync{"a", {}, true};
    e1.guard.atoms.push_back(x_atom(Rel::Lt, 5));
    Edge& e2 = b.add_edge(l0, l2);
    e2.sync = Sync{"a", {}, true};
    e2.guard.atoms.push_back(x_atom(Rel::Ge, 5));
    SystemModel sys = one_template_system(b.finalize());
    CHECK(well_formed(sys).empty());
    auto res = check_deterministic(sys.templates[0], sys);
    CHECK(res.deterministic);
}

TEST_CASE("overlapping guards yield a witness pair") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    int l1 = b.add_location("l1");
    int l2 = b.add_location("l2");
    b.set_initial(l0);
    Edge& e1 = b.add_edge(l0, l1);
    e1.sync = Sync{"a", {}, true};
    e1.guard.atoms.push_back(x_atom(Rel::Lt, 5));
    Edge& e2 = b.add_edge(l0, l2);
    e2.sync = Sync{"a", {}, true};
    e2.guard.atoms.push_back(x_atom(Rel::Lt, 7));
    SystemModel sys = one_template_system(b.finalize());
    auto res = check_deterministic(sys.templates[0], sys);
    CHECK(!res.deterministic);
    CHECK(res.edge_a == 0);
    CHECK(res.edge_b == 1);
}

TEST_CASE("discrete guards over bounded variables are enumerated") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    int l1 = b.add_location("l1");
    b.set_initial(l0);
    Edge& e1 = b.add_edge(l0, l1);
    e1.sync = Sync{"a", {}, true};
    e1.guard.discrete = Expr::var("v");
    Edge& e2 = b.add_edge(l0, l1);
    e2.sync = Sync{"a", {}, true};
    e2.guard.discrete = Expr::unary(UnOp::Not, Expr::var("v"));
    SystemModel sys = one_template_system(b.finalize());
    VarDecl v;
    v.name = "v";
    v.is_bool = true;
    sys.globals.vars.push_back(v);
    CHECK(check_deterministic(sys.templates[0], sys).deterministic);

    // make them overlap at v == true
    sys.templates[0].edges[1].guard.discrete = Expr::var("v");
    CHECK(!check_deterministic(sys.templates[0], sys).deterministic);
}

TEST_CASE("well_formed rejects undeclared clocks and bad instance arity") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    int l1 = b.add_location("l1");
    b.set_initial(l0);
    Edge& e = b.add_edge(l0, l1);
    e.guard.atoms.push_back(ClockAtom::simple(ClockRef::scalar("ghost"), Rel::Ge, Expr::int_lit(1)));
    SystemModel sys = one_template_system(b.finalize());
    auto diags = well_formed(sys);
    CHECK(diags.has_errors());
    bool found = false;
    for (const auto& d : diags.items())
        if (d.message.find("ghost") != std::string::npos) found = true;
    CHECK(found);

    sys.templates[0].edges[0].guard.atoms.clear();
    sys.instances[0].args = {1, 2};
    auto diags2 = well_formed(sys);
    CHECK(diags2.has_errors());
}

TEST_CASE("well_formed is idempotent and side-effect free") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    b.set_initial(l0);
    SystemModel sys = one_template_system(b.finalize());
    auto a = well_formed(sys);
    auto b2 = well_formed(sys);
    CHECK(a.size() == b2.size());
    CHECK(a.empty());
}

TEST_CASE("invariants must be upper bounds without differences") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    b.set_initial(l0);
    b.add_invariant_atom(l0, x_atom(Rel::Ge, 3));
    SystemModel sys = one_template_system(b.finalize());
    CHECK(well_formed(sys).has_errors());
}

TEST_CASE("urgent channel edges may not constrain clocks") {
    TemplateBuilder b("T");
    int l0 = b.add_location("l0");
    int l1 = b.add_location("l1");
    b.set_initial(l0);
    Edge& e = b.add_edge(l0, l1);
    e.sync = Sync{"u", {}, true};
    e.guard.atoms.push_back(x_atom(Rel::Ge, 1));
    SystemModel sys = one_template_system(b.finalize());
    sys.globals.channels.push_back({"u", {}, true});
    CHECK(well_formed(sys).has_errors());
}
