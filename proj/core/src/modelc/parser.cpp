#include <charconv>
#include <functional>
#include <set>

#include "masforge/modelc/syntax.hpp"

namespace masforge {

namespace {

const std::set<std::string_view> kTopWords = {"model", "environment", "agent", "action", "interaction"};
const std::set<std::string_view> kEnvWords = {"deterministic", "static", "continuous", "state", "perception", "drift"};
const std::set<std::string_view> kAgentWords = {"role",   "perception", "attribute", "representation",
                                                "knowledge", "beliefs", "desire",   "intention",
                                                "rule",   "goal",       "score"};
const std::set<std::string_view> kEffectWords = {"inform", "ask", "constrain", "partner"};

struct Failure {};

class Parser {
public:
    Parser(const std::vector<Token>& tokens, ValidationReport& report) : t_(tokens), report_(report) {}

    Ast run() {
        if (word("model")) {
            ast_.model_loc = advance().loc;
            try {
                ast_.model_name = ident("model name").text;
            } catch (const Failure&) {
            }
        } else {
            report_.error("E-SYNTAX", "expected 'model <name>' at the start, found " + describe(peek()), peek().loc);
        }
        while (peek().kind != TokenKind::End) {
            std::size_t before = pos_;
            try {
                if (word("environment")) {
                    parse_environment();
                } else if (word("agent")) {
                    parse_agent();
                } else if (word("action")) {
                    parse_action();
                } else if (word("interaction")) {
                    parse_interaction();
                } else if (word("model")) {
                    fail(peek(), "a file declares one model");
                } else {
                    fail(peek(), "expected 'environment', 'agent', 'action' or 'interaction'");
                }
            } catch (const Failure&) {
                if (pos_ == before) advance();
                skip_to_top();
            }
        }
        return std::move(ast_);
    }

private:
    // --- token helpers ------------------------------------------------------

    const Token& peek(std::size_t k = 0) const {
        std::size_t i = std::min(pos_ + k, t_.size() - 1);
        return t_[i];
    }

    const Token& advance() {
        const Token& tok = t_[pos_];
        if (pos_ + 1 < t_.size()) ++pos_;
        return tok;
    }

    bool punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == TokenKind::Punct && peek(k).text == p;
    }

    bool word(std::string_view w, std::size_t k = 0) const {
        return peek(k).kind == TokenKind::Ident && peek(k).text == w;
    }

    // A top-level keyword that opens a declaration (`from agent` does not).
    bool at_top_start() const {
        const Token& tok = peek();
        if (tok.kind != TokenKind::Ident || !kTopWords.count(tok.text)) return false;
        if (pos_ > 0 && t_[pos_ - 1].kind == TokenKind::Ident && t_[pos_ - 1].text == "from") return false;
        return peek(1).kind == TokenKind::Ident;
    }

    static std::string describe(const Token& tok) {
        switch (tok.kind) {
        case TokenKind::End: return "end of input";
        case TokenKind::String: return "string \"" + tok.text + "\"";
        default: return "'" + tok.text + "'";
        }
    }

    [[noreturn]] void fail(const Token& tok, const std::string& expected) {
        report_.error("E-SYNTAX", expected + ", found " + describe(tok), tok.loc);
        throw Failure{};
    }

    const Token& expect(std::string_view p) {
        if (!punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
        return advance();
    }

    void expect_word(std::string_view w) {
        if (!word(w)) fail(peek(), "expected '" + std::string(w) + "'");
        advance();
    }

    const Token& ident(const std::string& what) {
        if (peek().kind != TokenKind::Ident) fail(peek(), "expected " + what);
        return advance();
    }

    // --- recovery -------------------------------------------------------------

    void skip_to_top() {
        int depth = 0;
        while (peek().kind != TokenKind::End) {
            if (depth <= 0 && at_top_start()) return;
            if (punct("{")) ++depth;
            if (punct("}")) --depth;
            advance();
        }
    }

    // Skips to the next member of the enclosing block: a member keyword or
    // the block's closing brace, never past a top-level declaration.
    void skip_member(const std::function<bool()>& member_start, bool must_advance) {
        int depth = 0;
        if (must_advance) {
            if (punct("}") || at_top_start() || peek().kind == TokenKind::End) return;
            if (punct("{")) ++depth;
            advance();
        }
        while (peek().kind != TokenKind::End) {
            if (depth == 0 && (punct("}") || at_top_start() || member_start())) return;
            if (punct("{")) ++depth;
            if (punct("}")) --depth;
            advance();
        }
    }

    template <typename Member>
    void block(const Token& open, Member member, const std::function<bool()>& member_start) {
        while (true) {
            if (punct("}")) {
                advance();
                return;
            }
            if (peek().kind == TokenKind::End || at_top_start()) {
                report_.error("E-UNCLOSED", "block opened here is never closed", open.loc);
                return;
            }
            std::size_t start = pos_;
            try {
                member();
            } catch (const Failure&) {
                skip_member(member_start, pos_ == start);
            }
        }
    }

    // --- values -------------------------------------------------------------

    static std::optional<Value> number(const Token& tok, bool negative) {
        const char* b = tok.text.data();
        const char* e = b + tok.text.size();
        if (tok.kind == TokenKind::Int) {
            std::int64_t v = 0;
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec != std::errc{} || p != e) return std::nullopt;
            return Value::integer(negative ? -v : v);
        }
        double d = 0;
        auto [p, ec] = std::from_chars(b, e, d);
        if (ec != std::errc{} || p != e) return std::nullopt;
        return Value::real(negative ? -d : d);
    }

    Value literal() {
        bool negative = false;
        if (punct("-")) {
            advance();
            negative = true;
        }
        const Token& tok = peek();
        if (tok.kind == TokenKind::Int || tok.kind == TokenKind::Real) {
            auto v = number(tok, negative);
            if (!v) fail(tok, "number out of range");
            advance();
            return *v;
        }
        if (!negative && (tok.kind == TokenKind::String || tok.kind == TokenKind::Ident)) {
            advance();
            return Value::symbol(tok.text);
        }
        fail(tok, "expected a literal");
    }

    long integer(const std::string& what) {
        Value v = literal();
        if (!v.is_int()) fail(t_[pos_ - 1], "expected an integer " + what);
        return static_cast<long>(v.as_int());
    }

    bool boolean() {
        if (word("true")) {
            advance();
            return true;
        }
        if (word("false")) {
            advance();
            return false;
        }
        fail(peek(), "expected 'true' or 'false'");
    }

    ValueKind value_kind() {
        const Token& tok = ident("a value kind (int, symbol, real)");
        auto k = parse_value_kind(tok.text);
        if (!k) {
            --pos_;
            fail(tok, "expected a value kind (int, symbol, real)");
        }
        return *k;
    }

    // --- expressions --------------------------------------------------------

    Expr expression() { return additive(); }

    Expr additive() {
        Expr lhs = multiplicative();
        while (punct("+") || punct("-")) {
            const Token& op = advance();
            Expr rhs = multiplicative();
            lhs = Expr::binary(op.text == "+" ? ExprOp::Add : ExprOp::Sub, std::move(lhs), std::move(rhs), op.loc);
        }
        return lhs;
    }

    Expr multiplicative() {
        Expr lhs = unary();
        while (punct("*") || punct("/")) {
            const Token& op = advance();
            Expr rhs = unary();
            lhs = Expr::binary(op.text == "*" ? ExprOp::Mul : ExprOp::Div, std::move(lhs), std::move(rhs), op.loc);
        }
        return lhs;
    }

    Expr unary() {
        if (punct("-")) {
            const Token& op = advance();
            const Token& next = peek();
            if (next.kind == TokenKind::Int || next.kind == TokenKind::Real) {
                auto v = number(next, true);
                if (!v) fail(next, "number out of range");
                advance();
                return Expr::lit(*v, op.loc);
            }
            return Expr::unary(ExprOp::Neg, unary(), op.loc);
        }
        return primary();
    }

    Expr primary() {
        const Token& tok = peek();
        switch (tok.kind) {
        case TokenKind::Int:
        case TokenKind::Real: {
            auto v = number(tok, false);
            if (!v) fail(tok, "number out of range");
            advance();
            return Expr::lit(*v, tok.loc);
        }
        case TokenKind::String:
            advance();
            return Expr::lit(Value::symbol(tok.text), tok.loc);
        case TokenKind::Ident:
            advance();
            if (tok.text == "one_of" && punct("(")) {
                advance();
                std::vector<Expr> alternatives;
                if (!punct(")")) {
                    alternatives.push_back(expression());
                    while (punct(",")) {
                        advance();
                        alternatives.push_back(expression());
                    }
                }
                expect(")");
                return Expr::one_of(std::move(alternatives), tok.loc);
            }
            return Expr::ref(tok.text, tok.loc);
        case TokenKind::Punct:
            if (tok.text == "(") {
                advance();
                Expr inner = expression();
                expect(")");
                return inner;
            }
            break;
        case TokenKind::End: break;
        }
        fail(tok, "expected an expression");
    }

    Guard guard() {
        Guard g;
        if (word("true")) {
            advance();
            return g;
        }
        while (true) {
            const Token& key = ident("a guard term 'key op value'");
            static const std::pair<std::string_view, CmpOp> kOps[] = {{"==", CmpOp::Eq}, {"!=", CmpOp::Ne},
                                                                     {"<=", CmpOp::Le}, {">=", CmpOp::Ge},
                                                                     {"<", CmpOp::Lt},  {">", CmpOp::Gt}};
            std::optional<CmpOp> op;
            for (const auto& [text, o] : kOps) {
                if (punct(text)) op = o;
            }
            if (!op) fail(peek(), "expected a comparison operator");
            advance();
            Value rhs = literal();
            g.terms.push_back({key.text, *op, std::move(rhs), key.loc});
            if (!word("and")) break;
            advance();
        }
        return g;
    }

    ActionCall call() {
        const Token& name = ident("an action name");
        ActionCall c{name.text, {}, name.loc};
        if (punct("(")) {
            advance();
            if (!punct(")")) {
                c.args.push_back(expression());
                while (punct(",")) {
                    advance();
                    c.args.push_back(expression());
                }
            }
            expect(")");
        }
        return c;
    }

    std::vector<std::string> name_list(const std::string& what) {
        std::vector<std::string> names{ident(what).text};
        while (punct(",")) {
            advance();
            names.push_back(ident(what).text);
        }
        return names;
    }

    // --- declarations -------------------------------------------------------

    void parse_environment() {
        advance();
        EnvironmentSpec env;
        const Token& name = ident("environment name");
        env.name = name.text;
        env.loc = name.loc;
        const Token& open = expect("{");
        auto starts = [this] { return peek().kind == TokenKind::Ident && kEnvWords.count(peek().text) > 0; };
        block(
            open,
            [&] {
                const Token& w = peek();
                if (word("deterministic") || word("static") || word("continuous")) {
                    advance();
                    expect(":");
                    bool b = boolean();
                    (w.text == "deterministic" ? env.deterministic
                     : w.text == "static"      ? env.static_flag
                                               : env.continuous) = b;
                } else if (word("state")) {
                    advance();
                    const Token& n = ident("state variable name");
                    expect(":");
                    ValueKind k = value_kind();
                    expect("=");
                    env.state_vars.push_back({n.text, k, literal(), n.loc});
                } else if (word("perception")) {
                    advance();
                    const Token& n = ident("perception name");
                    expect(":");
                    env.perceptions.push_back({n.text, PerceptSource::Environment, value_kind(), n.loc});
                } else if (word("drift")) {
                    advance();
                    const Token& n = ident("drift target");
                    expect(":=");
                    env.drift_rules.push_back({n.text, expression(), n.loc});
                } else {
                    fail(w, "expected an environment member");
                }
            },
            starts);
        ast_.environments.push_back(std::move(env));
    }

    void facts(std::vector<FactDecl>& out) {
        const Token& open = expect("{");
        auto starts = [this] { return peek().kind == TokenKind::Ident && punct("=", 1); };
        while (true) {
            if (punct("}")) {
                advance();
                return;
            }
            if (peek().kind == TokenKind::End || at_top_start()) {
                report_.error("E-UNCLOSED", "block opened here is never closed", open.loc);
                throw Failure{};
            }
            std::size_t start = pos_;
            try {
                const Token& key = ident("a fact 'key = value'");
                expect("=");
                out.push_back({key.text, literal(), key.loc});
            } catch (const Failure&) {
                skip_member(starts, pos_ == start);
            }
        }
    }

    void parse_agent() {
        advance();
        AgentDecl decl;
        AgentSpec& a = decl.spec;
        const Token& name = ident("agent name");
        a.name = name.text;
        a.loc = name.loc;
        expect(":");
        const Token& kind = ident("agent kind");
        decl.kind_word = kind.text;
        decl.kind_loc = kind.loc;
        const Token& open = expect("{");
        auto starts = [this] { return peek().kind == TokenKind::Ident && kAgentWords.count(peek().text) > 0; };
        block(
            open,
            [&] {
                const Token& w = peek();
                if (word("role")) {
                    advance();
                    const Token& n = ident("role name");
                    a.roles.push_back({n.text, n.loc});
                } else if (word("perception")) {
                    advance();
                    const Token& n = ident("perception name");
                    expect(":");
                    PerceptDecl p{n.text, PerceptSource::Environment, value_kind(), n.loc};
                    if (word("from")) {
                        advance();
                        if (word("environment")) {
                            p.source = PerceptSource::Environment;
                        } else if (word("agent")) {
                            p.source = PerceptSource::Agent;
                        } else {
                            fail(peek(), "expected 'environment' or 'agent'");
                        }
                        advance();
                    }
                    a.perceptions.push_back(std::move(p));
                } else if (word("attribute")) {
                    advance();
                    const Token& n = ident("attribute name");
                    expect(":");
                    ValueKind k = value_kind();
                    expect("=");
                    a.attributes.push_back({n.text, k, literal(), n.loc});
                } else if (word("representation")) {
                    advance();
                    const Token& n = ident("representation name");
                    a.representations.push_back({n.text, n.loc});
                } else if (word("knowledge")) {
                    advance();
                    facts(a.knowledge);
                } else if (word("beliefs")) {
                    advance();
                    facts(a.beliefs);
                } else if (word("desire")) {
                    advance();
                    const Token& g = ident("goal name");
                    DesireRule d{g.text, 0, {}, {}, g.loc};
                    expect_word("priority");
                    d.priority = integer("priority");
                    if (word("when")) {
                        advance();
                        d.guard = guard();
                    }
                    if (word("conflicts")) {
                        advance();
                        d.conflicts = name_list("a conflicting goal");
                    }
                    a.desires.push_back(std::move(d));
                } else if (word("intention")) {
                    advance();
                    const Token& g = ident("goal name");
                    IntentionDecl i{g.text, {}, g.loc};
                    expect_word("plan");
                    expect("[");
                    if (!punct("]")) {
                        i.plan.push_back(call());
                        while (punct(",")) {
                            advance();
                            i.plan.push_back(call());
                        }
                    }
                    expect("]");
                    a.intentions.push_back(std::move(i));
                } else if (word("rule")) {
                    const Token& at = advance();
                    expect_word("on");
                    ReactiveRule r;
                    r.loc = at.loc;
                    r.event = ident("event name").text;
                    if (punct("(")) {
                        advance();
                        if (!punct(")")) r.bindings = name_list("a binding name");
                        expect(")");
                    }
                    if (word("when")) {
                        advance();
                        r.guard = guard();
                    }
                    expect("=>");
                    r.action = call();
                    a.rules.push_back(std::move(r));
                } else if (word("goal")) {
                    advance();
                    const Token& g = ident("goal name");
                    GoalRule r{g.text, 0, {}, {}, g.loc};
                    expect_word("priority");
                    r.priority = integer("priority");
                    if (word("when")) {
                        advance();
                        r.guard = guard();
                    }
                    expect("=>");
                    r.action = call();
                    a.goals.push_back(std::move(r));
                } else if (word("score")) {
                    advance();
                    const Token& n = ident("action name");
                    ScoreEntry s{n.text, {}, 0.0, n.loc};
                    if (word("when")) {
                        advance();
                        s.guard = guard();
                    }
                    expect("=");
                    Value v = literal();
                    if (!v.is_numeric()) fail(t_[pos_ - 1], "expected a numeric score");
                    s.score = v.to_double();
                    a.scores.push_back(std::move(s));
                } else {
                    fail(w, "expected an agent member");
                }
            },
            starts);
        ast_.agents.push_back(std::move(decl));
    }

    void parse_action() {
        advance();
        ActionSpec act;
        const Token& name = ident("action name");
        act.name = name.text;
        act.loc = name.loc;
        expect_word("by");
        act.actor = ident("acting agent").text;
        expect("(");
        if (!punct(")")) {
            while (true) {
                const Token& p = ident("parameter name");
                expect(":");
                act.params.push_back({p.text, value_kind(), p.loc});
                if (!punct(",")) break;
                advance();
            }
        }
        expect(")");
        const Token& open = expect("{");
        auto starts = [this] {
            return peek().kind == TokenKind::Ident && (kEffectWords.count(peek().text) > 0 || punct(":=", 1));
        };
        block(
            open,
            [&] {
                const Token& w = peek();
                Effect e;
                e.loc = w.loc;
                if (w.kind == TokenKind::Ident && punct(":=", 1)) {
                    advance();
                    advance();
                    if (w.text.rfind("self.", 0) == 0) {
                        e.kind = EffectKind::AssignSelf;
                        e.target = w.text.substr(5);
                    } else {
                        e.kind = EffectKind::Assign;
                        e.target = w.text;
                    }
                    e.value = expression();
                } else if (word("inform")) {
                    advance();
                    e.kind = EffectKind::Inform;
                    e.target = ident("receiving agent").text;
                    e.key = ident("fact key").text;
                    expect("=");
                    e.value = expression();
                } else if (word("ask")) {
                    advance();
                    e.kind = EffectKind::Ask;
                    e.target = ident("queried agent").text;
                    e.key = ident("fact key").text;
                } else if (word("constrain")) {
                    advance();
                    e.kind = EffectKind::Constrain;
                    e.target = ident("constrained agent").text;
                    e.constraints = name_list("a constraint name");
                } else if (word("partner")) {
                    advance();
                    e.kind = EffectKind::Partner;
                    e.target = ident("partner agent").text;
                } else {
                    fail(w, "expected an effect");
                }
                act.effects.push_back(std::move(e));
            },
            starts);
        ast_.actions.push_back(std::move(act));
    }

    void parse_interaction() {
        const Token& at = advance();
        InteractionSpec i;
        i.loc = at.loc;
        i.initiator = ident("agent name").text;
        expect("<->");
        i.responder = ident("agent name").text;
        if (word("reflexive")) {
            advance();
            i.reflexive = true;
        }
        expect_word("allows");
        auto performative = [&] {
            const Token& tok = peek();
            auto p = tok.kind == TokenKind::Ident ? parse_performative(tok.text) : std::nullopt;
            if (!p) fail(tok, "expected a performative");
            advance();
            i.allowed.push_back(*p);
        };
        if (peek().kind == TokenKind::Ident && parse_performative(peek().text)) {
            performative();
            while (punct(",")) {
                advance();
                performative();
            }
        }
        ast_.interactions.push_back(std::move(i));
    }

    const std::vector<Token>& t_;
    ValidationReport& report_;
    std::size_t pos_ = 0;
    Ast ast_;
};

}  // namespace

ParseResult parse(const SourceText& source) {
    LexResult lexed = lex(source);
    ParseResult out;
    out.report = std::move(lexed.report);
    out.ast = Parser(lexed.tokens, out.report).run();
    return out;
}

}  // namespace masforge
