#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "gridflow/common.hpp"
#include "gridflow/tokens.hpp"

namespace gridflow {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Synthetic grid world: colored shapes on a small grid, with rule-generated
// captions, QA pairs and edit tasks. Everything here is a pure function of
// (seed, arguments) and every generated label is checkable by rule.
// ---------------------------------------------------------------------------

struct Object {
    int row = 0;
    int col = 0;
    int shape = 0;  // index into shape_name()
    int color = 0;  // index into color_name()

    bool operator==(const Object&) const = default;
};

struct Scene {
    int rows = 8;
    int cols = 8;
    std::vector<Object> objects;

    bool operator==(const Scene&) const = default;

    void validate() const {
        std::set<std::pair<int, int>> seen;
        for (const Object& o : objects) {
            if (o.row < 0 || o.row >= rows || o.col < 0 || o.col >= cols)
                throw ValidationError("scene object out of range");
            if (o.shape < 0 || o.shape >= kNumShapes || o.color < 0 || o.color >= kNumColors)
                throw ValidationError("scene object has invalid shape/color");
            if (!seen.insert({o.row, o.col}).second)
                throw ValidationError("two objects share a cell");
        }
    }

    const Object* object_at(int r, int c) const {
        for (const Object& o : objects)
            if (o.row == r && o.col == c) return &o;
        return nullptr;
    }

    Object* object_at(int r, int c) {
        for (Object& o : objects)
            if (o.row == r && o.col == c) return &o;
        return nullptr;
    }

    /// Objects in row-major order; captions and diffs use this ordering.
    std::vector<Object> sorted_objects() const {
        std::vector<Object> v = objects;
        std::sort(v.begin(), v.end(), [](const Object& a, const Object& b) {
            return std::tie(a.row, a.col) < std::tie(b.row, b.col);
        });
        return v;
    }
};

// Cell encoding: 0 = EMPTY, 1 + shape*kNumColors + color otherwise.
constexpr int kCellEmpty = 0;
inline int cell_value(int shape, int color) { return 1 + shape * kNumColors + color; }
inline int cell_shape(int v) { return (v - 1) / kNumColors; }
inline int cell_color(int v) { return (v - 1) % kNumColors; }

inline std::string cell_label(int v) {
    if (v == kCellEmpty) return "EMPTY";
    return std::string(shape_name(cell_shape(v))) + ":" + color_name(cell_color(v));
}

inline int cell_from_label(const std::string& s) {
    if (s == "EMPTY") return kCellEmpty;
    auto pos = s.find(':');
    if (pos == std::string::npos) throw ValidationError("bad cell label: " + s);
    int sh = shape_from_name(s.substr(0, pos));
    int co = color_from_name(s.substr(pos + 1));
    if (sh < 0 || co < 0) throw ValidationError("bad cell label: " + s);
    return cell_value(sh, co);
}

struct GridImage {
    int rows = 8;
    int cols = 8;
    std::vector<int> cells;  // row-major, size rows*cols

    bool operator==(const GridImage&) const = default;

    int at(int r, int c) const { return cells[r * cols + c]; }
    int count_objects() const {
        int n = 0;
        for (int v : cells) n += (v != kCellEmpty);
        return n;
    }
};

inline GridImage render(const Scene& scene) {
    scene.validate();
    GridImage img;
    img.rows = scene.rows;
    img.cols = scene.cols;
    img.cells.assign(static_cast<size_t>(scene.rows) * scene.cols, kCellEmpty);
    for (const Object& o : scene.objects)
        img.cells[o.row * scene.cols + o.col] = cell_value(o.shape, o.color);
    return img;
}

inline Scene scene_from_image(const GridImage& img) {
    Scene s;
    s.rows = img.rows;
    s.cols = img.cols;
    for (int r = 0; r < img.rows; ++r)
        for (int c = 0; c < img.cols; ++c) {
            int v = img.at(r, c);
            if (v != kCellEmpty) s.objects.push_back({r, c, cell_shape(v), cell_color(v)});
        }
    return s;
}

// ---------------------------------------------------------------------------
// Scene sampling
// ---------------------------------------------------------------------------

enum class Difficulty { Single, Double, Multi };

inline Difficulty difficulty_from_string(const std::string& s) {
    if (s == "single") return Difficulty::Single;
    if (s == "double") return Difficulty::Double;
    if (s == "multi") return Difficulty::Multi;
    throw ValidationError("unknown difficulty: " + s);
}

inline Scene sample_scene(Rng& rng, Difficulty difficulty, int rows = 8, int cols = 8) {
    int n = 0;
    switch (difficulty) {
        case Difficulty::Single: n = 1; break;
        case Difficulty::Double: n = 2; break;
        case Difficulty::Multi: n = 3 + rng.uniform_index(4); break;  // 3..6
    }
    Scene s;
    s.rows = rows;
    s.cols = cols;
    std::set<int> used;
    for (int i = 0; i < n; ++i) {
        int cell;
        do {
            cell = rng.uniform_index(static_cast<size_t>(rows) * cols);
        } while (used.count(cell));
        used.insert(cell);
        Object o;
        o.row = cell / cols;
        o.col = cell % cols;
        o.shape = rng.uniform_index(kNumShapes);
        o.color = rng.uniform_index(kNumColors);
        s.objects.push_back(o);
    }
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Captions
// ---------------------------------------------------------------------------

inline std::string caption_string(const Scene& scene) {
    if (scene.objects.empty()) return "empty grid";
    std::string out;
    auto objs = scene.sorted_objects();
    for (size_t i = 0; i < objs.size(); ++i) {
        const Object& o = objs[i];
        if (i) out += " and ";
        out += "a ";
        out += color_name(o.color);
        out += ' ';
        out += shape_name(o.shape);
        out += " at row " + std::to_string(o.row) + " col " + std::to_string(o.col);
    }
    return out;
}

inline TokenList caption_tokens(const Scene& scene) { return vocab().tokenize(caption_string(scene)); }

// ---------------------------------------------------------------------------
// Edit instructions: parse + apply. Instructions are sequences of clauses
// joined by "and"; each clause has a fixed verb-led token pattern.
// ---------------------------------------------------------------------------

enum class EditVerb { Recolor, Move, Add, Remove, Swap };

struct EditClause {
    EditVerb verb;
    int color = -1, shape = -1;   // object selector (recolor/move/add/remove)
    int row = -1, col = -1;       // primary cell
    int row2 = -1, col2 = -1;     // destination / second cell
    int new_color = -1;           // recolor target
};

namespace detail {

class TokenCursor {
  public:
    explicit TokenCursor(const TokenList& toks) : toks_(toks) {}
    bool done() const { return i_ >= toks_.size(); }
    const std::string& peek() const {
        if (done()) throw ValidationError("instruction ended unexpectedly");
        return vocab().word_text(toks_[i_]);
    }
    std::string take() {
        std::string w = peek();
        ++i_;
        return w;
    }
    void expect(const std::string& w) {
        std::string got = take();
        if (got != w) throw ValidationError("expected '" + w + "' in instruction, got '" + got + "'");
    }
    int take_digit() {
        std::string w = take();
        if (w.size() != 1 || w[0] < '0' || w[0] > '8')
            throw ValidationError("expected a grid coordinate, got '" + w + "'");
        return w[0] - '0';
    }
    int take_color() {
        std::string w = take();
        int c = color_from_name(w);
        if (c < 0) throw ValidationError("expected a color, got '" + w + "'");
        return c;
    }
    int take_shape() {
        std::string w = take();
        int s = shape_from_name(w);
        if (s < 0) throw ValidationError("expected a shape, got '" + w + "'");
        return s;
    }

  private:
    const TokenList& toks_;
    size_t i_ = 0;
};

}  // namespace detail

inline std::vector<EditClause> parse_instruction(const TokenList& tokens) {
    detail::TokenCursor cur(tokens);
    std::vector<EditClause> clauses;
    for (;;) {
        EditClause cl;
        std::string verb = cur.take();
        if (verb == "recolor") {
            cl.verb = EditVerb::Recolor;
            cur.expect("the");
            cl.color = cur.take_color();
            cl.shape = cur.take_shape();
            cur.expect("at");
            cur.expect("row");
            cl.row = cur.take_digit();
            cur.expect("col");
            cl.col = cur.take_digit();
            cur.expect("to");
            cl.new_color = cur.take_color();
        } else if (verb == "move") {
            cl.verb = EditVerb::Move;
            cur.expect("the");
            cl.color = cur.take_color();
            cl.shape = cur.take_shape();
            cur.expect("at");
            cur.expect("row");
            cl.row = cur.take_digit();
            cur.expect("col");
            cl.col = cur.take_digit();
            cur.expect("to");
            cur.expect("row");
            cl.row2 = cur.take_digit();
            cur.expect("col");
            cl.col2 = cur.take_digit();
        } else if (verb == "add") {
            cl.verb = EditVerb::Add;
            cur.expect("a");
            cl.color = cur.take_color();
            cl.shape = cur.take_shape();
            cur.expect("at");
            cur.expect("row");
            cl.row = cur.take_digit();
            cur.expect("col");
            cl.col = cur.take_digit();
        } else if (verb == "remove") {
            cl.verb = EditVerb::Remove;
            cur.expect("the");
            cl.color = cur.take_color();
            cl.shape = cur.take_shape();
            cur.expect("at");
            cur.expect("row");
            cl.row = cur.take_digit();
            cur.expect("col");
            cl.col = cur.take_digit();
        } else if (verb == "swap") {
            cl.verb = EditVerb::Swap;
            cur.expect("the");
            cur.expect("objects");
            cur.expect("at");
            cur.expect("row");
            cl.row = cur.take_digit();
            cur.expect("col");
            cl.col = cur.take_digit();
            cur.expect("and");
            cur.expect("row");
            cl.row2 = cur.take_digit();
            cur.expect("col");
            cl.col2 = cur.take_digit();
        } else {
            throw ValidationError("unknown edit verb: '" + verb + "'");
        }
        clauses.push_back(cl);
        if (cur.done()) break;
        cur.expect("and");
    }
    return clauses;
}

inline void apply_clause(Scene& s, const EditClause& cl) {
    auto in_range = [&](int r, int c) { return r >= 0 && r < s.rows && c >= 0 && c < s.cols; };
    switch (cl.verb) {
        case EditVerb::Recolor: {
            Object* o = s.object_at(cl.row, cl.col);
            if (!o || o->color != cl.color || o->shape != cl.shape)
                throw ValidationError("recolor: no matching object at the named cell");
            o->color = cl.new_color;
            break;
        }
        case EditVerb::Move: {
            if (!in_range(cl.row2, cl.col2)) throw ValidationError("move: destination out of range");
            Object* o = s.object_at(cl.row, cl.col);
            if (!o || o->color != cl.color || o->shape != cl.shape)
                throw ValidationError("move: no matching object at the named cell");
            if (s.object_at(cl.row2, cl.col2)) throw ValidationError("move: destination occupied");
            o->row = cl.row2;
            o->col = cl.col2;
            break;
        }
        case EditVerb::Add: {
            if (!in_range(cl.row, cl.col)) throw ValidationError("add: cell out of range");
            if (s.object_at(cl.row, cl.col)) throw ValidationError("add: cell occupied");
            s.objects.push_back({cl.row, cl.col, cl.shape, cl.color});
            break;
        }
        case EditVerb::Remove: {
            Object* o = s.object_at(cl.row, cl.col);
            if (!o || o->color != cl.color || o->shape != cl.shape)
                throw ValidationError("remove: no matching object at the named cell");
            s.objects.erase(s.objects.begin() + (o - s.objects.data()));
            break;
        }
        case EditVerb::Swap: {
            Object* a = s.object_at(cl.row, cl.col);
            Object* b = s.object_at(cl.row2, cl.col2);
            if (!a || !b) throw ValidationError("swap: both cells must be occupied");
            std::swap(a->row, b->row);
            std::swap(a->col, b->col);
            break;
        }
    }
    s.validate();
}

inline Scene apply_instruction(const Scene& source, const TokenList& instruction) {
    Scene s = source;
    for (const EditClause& cl : parse_instruction(instruction)) apply_clause(s, cl);
    return s;
}

/// Cells whose content differs between two scenes, row-major order.
inline std::vector<std::pair<int, int>> diff_cells(const Scene& a, const Scene& b) {
    GridImage ia = render(a), ib = render(b);
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < ia.rows; ++r)
        for (int c = 0; c < ia.cols; ++c)
            if (ia.at(r, c) != ib.at(r, c)) out.push_back({r, c});
    return out;
}

// ---------------------------------------------------------------------------
// Task bundles: caption + QA + edits for one scene.
// ---------------------------------------------------------------------------

struct QaPair {
    TokenList question;
    TokenList answer;
};

struct EditTask {
    TokenList instruction;
    Scene target_scene;
};

struct TaskBundle {
    TokenList caption;
    std::vector<QaPair> qa;
    std::vector<EditTask> edits;
};

namespace detail {

inline std::string obj_phrase(const Object& o) {
    return std::string(color_name(o.color)) + " " + shape_name(o.shape);
}

inline std::string cell_phrase(int r, int c) {
    return "row " + std::to_string(r) + " col " + std::to_string(c);
}

inline std::vector<std::pair<int, int>> empty_cells(const Scene& s) {
    GridImage img = render(s);
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < s.rows; ++r)
        for (int c = 0; c < s.cols; ++c)
            if (img.at(r, c) == kCellEmpty) out.push_back({r, c});
    return out;
}

}  // namespace detail

/// Verbs applicable to a scene (add needs a free cell, swap needs two objects, ...).
inline std::vector<EditVerb> applicable_verbs(const Scene& s) {
    std::vector<EditVerb> v;
    size_t n = s.objects.size();
    bool has_empty = n < static_cast<size_t>(s.rows) * s.cols;
    if (n >= 1) v.push_back(EditVerb::Recolor);
    if (n >= 1 && has_empty) v.push_back(EditVerb::Move);
    if (has_empty) v.push_back(EditVerb::Add);
    if (n >= 1) v.push_back(EditVerb::Remove);
    if (n >= 2) v.push_back(EditVerb::Swap);
    return v;
}

inline EditTask make_edit(const Scene& s, EditVerb verb, Rng& rng) {
    std::string text;
    switch (verb) {
        case EditVerb::Recolor: {
            const Object& o = s.objects[rng.uniform_index(s.objects.size())];
            int nc = (o.color + 1 + rng.uniform_index(kNumColors - 1)) % kNumColors;
            text = "recolor the " + detail::obj_phrase(o) + " at " + detail::cell_phrase(o.row, o.col) +
                   " to " + color_name(nc);
            break;
        }
        case EditVerb::Move: {
            const Object& o = s.objects[rng.uniform_index(s.objects.size())];
            auto empties = detail::empty_cells(s);
            auto [r2, c2] = empties[rng.uniform_index(empties.size())];
            text = "move the " + detail::obj_phrase(o) + " at " + detail::cell_phrase(o.row, o.col) +
                   " to " + detail::cell_phrase(r2, c2);
            break;
        }
        case EditVerb::Add: {
            auto empties = detail::empty_cells(s);
            auto [r, c] = empties[rng.uniform_index(empties.size())];
            int sh = rng.uniform_index(kNumShapes);
            int co = rng.uniform_index(kNumColors);
            text = std::string("add a ") + color_name(co) + " " + shape_name(sh) + " at " +
                   detail::cell_phrase(r, c);
            break;
        }
        case EditVerb::Remove: {
            const Object& o = s.objects[rng.uniform_index(s.objects.size())];
            text = "remove the " + detail::obj_phrase(o) + " at " + detail::cell_phrase(o.row, o.col);
            break;
        }
        case EditVerb::Swap: {
            size_t i = rng.uniform_index(s.objects.size());
            size_t j = rng.uniform_index(s.objects.size() - 1);
            if (j >= i) ++j;
            const Object& a = s.objects[i];
            const Object& b = s.objects[j];
            text = "swap the objects at " + detail::cell_phrase(a.row, a.col) + " and " +
                   detail::cell_phrase(b.row, b.col);
            break;
        }
    }
    EditTask task;
    task.instruction = vocab().tokenize(text);
    task.target_scene = apply_instruction(s, task.instruction);
    return task;
}

struct AnnotateConfig {
    int max_qa = 4;
    int max_edits = 2;
};

inline TaskBundle annotate(const Scene& scene, Rng& rng, const AnnotateConfig& cfg = {}) {
    scene.validate();
    TaskBundle tb;
    tb.caption = caption_tokens(scene);

    const Vocab& vb = vocab();
    auto add_qa = [&](const std::string& q, const std::string& a) {
        tb.qa.push_back({vb.tokenize(q), vb.tokenize(a)});
    };

    // Counting question always present.
    add_qa("how many objects", std::to_string(scene.objects.size()));

    if (!scene.objects.empty()) {
        // Color question: position pins the object, so it is always well-posed.
        const Object& oc = scene.objects[rng.uniform_index(scene.objects.size())];
        add_qa("what color is the " + std::string(shape_name(oc.shape)) + " at " +
                   detail::cell_phrase(oc.row, oc.col),
               color_name(oc.color));

        // Position question only when the (color, shape) pair is unique.
        std::vector<const Object*> unique;
        for (const Object& o : scene.objects) {
            int same = 0;
            for (const Object& p : scene.objects)
                same += (p.color == o.color && p.shape == o.shape);
            if (same == 1) unique.push_back(&o);
        }
        if (!unique.empty() && static_cast<int>(tb.qa.size()) < cfg.max_qa) {
            const Object& o = *unique[rng.uniform_index(unique.size())];
            add_qa("where is the " + detail::obj_phrase(o), detail::cell_phrase(o.row, o.col));
        }
        if (static_cast<int>(tb.qa.size()) < cfg.max_qa) {
            int color = rng.uniform_index(kNumColors);
            int n = 0;
            for (const Object& o : scene.objects) n += (o.color == color);
            add_qa(std::string("how many ") + color_name(color) + " objects", std::to_string(n));
        }
    }

    auto verbs = applicable_verbs(scene);
    for (int i = 0; i < cfg.max_edits && !verbs.empty(); ++i)
        tb.edits.push_back(make_edit(scene, verbs[rng.uniform_index(verbs.size())], rng));

    return tb;
}

// ---------------------------------------------------------------------------
// Constraint checking (toy compositional checker).
// ---------------------------------------------------------------------------

struct ObjectConstraint {
    int shape = -1;  // required
    int color = -1;  // -1 = unconstrained
    int row = -1, col = -1;
};

struct ConstraintSpec {
    std::vector<ObjectConstraint> objects;
    int expected_count = -1;  // -1 = unconstrained
    bool expect_empty = false;

    void validate() const {
        if (expect_empty && !objects.empty())
            throw ValidationError("constraint spec: empty grid cannot list objects");
        if (!expect_empty && objects.empty() && expected_count < 0)
            throw ValidationError("constraint spec: no constraints given");
        for (const auto& o : objects) {
            if (o.shape < 0 || o.shape >= kNumShapes)
                throw ValidationError("constraint spec: object without a valid shape");
            if (o.color >= kNumColors) throw ValidationError("constraint spec: invalid color");
            if ((o.row >= 0) != (o.col >= 0))
                throw ValidationError("constraint spec: partial position");
        }
    }
};

enum class Category { SingleObj = 0, TwoObj, Counting, Colors, Position, ColorAttr };
constexpr int kNumCategories = 6;

inline const char* category_name(int i) {
    static const char* names[kNumCategories] = {"single_obj", "two_obj",  "counting",
                                                "colors",     "position", "color_attr"};
    return names[i];
}

struct CategoryReport {
    std::array<bool, kNumCategories> applicable{};
    std::array<bool, kNumCategories> pass{};
    bool overall = true;

    bool applicable_for(Category c) const { return applicable[static_cast<int>(c)]; }
    bool pass_for(Category c) const { return pass[static_cast<int>(c)]; }
};

/// Derive a constraint spec from a caption-grammar prompt. Color and position
/// are optional per object ("a square", "a red square", "a red square at row 1
/// col 2"); "empty grid" is also accepted.
inline ConstraintSpec spec_from_prompt(const TokenList& prompt) {
    ConstraintSpec spec;
    detail::TokenCursor cur(prompt);
    std::string first = cur.peek();
    if (first == "empty") {
        cur.expect("empty");
        cur.expect("grid");
        if (!cur.done()) throw ValidationError("trailing tokens after 'empty grid'");
        spec.expect_empty = true;
        spec.expected_count = 0;
        return spec;
    }
    for (;;) {
        ObjectConstraint oc;
        cur.expect("a");
        std::string w = cur.take();
        int color = color_from_name(w);
        if (color >= 0) {
            oc.color = color;
            w = cur.take();
        }
        oc.shape = shape_from_name(w);
        if (oc.shape < 0) throw ValidationError("expected a shape in prompt, got '" + w + "'");
        if (!cur.done() && cur.peek() == "at") {
            cur.expect("at");
            cur.expect("row");
            oc.row = cur.take_digit();
            cur.expect("col");
            oc.col = cur.take_digit();
        }
        spec.objects.push_back(oc);
        if (cur.done()) break;
        cur.expect("and");
    }
    spec.expected_count = static_cast<int>(spec.objects.size());
    return spec;
}

inline ConstraintSpec spec_from_prompt(const std::string& prompt) {
    return spec_from_prompt(vocab().tokenize(prompt));
}

inline CategoryReport check_constraints(const GridImage& image, const ConstraintSpec& spec) {
    spec.validate();
    CategoryReport rep;
    Scene found = scene_from_image(image);

    auto multiset_contains = [&](bool use_color) {
        // Greedy bipartite matching over a tiny instance: each constraint must
        // claim a distinct image object.
        std::vector<bool> used(found.objects.size(), false);
        for (const auto& oc : spec.objects) {
            if (use_color && oc.color < 0) continue;
            bool matched = false;
            for (size_t i = 0; i < found.objects.size(); ++i) {
                if (used[i]) continue;
                const Object& o = found.objects[i];
                if (o.shape != oc.shape) continue;
                if (use_color && o.color != oc.color) continue;
                used[i] = true;
                matched = true;
                break;
            }
            if (!matched) return false;
        }
        return true;
    };

    auto set_cat = [&](Category c, bool applicable, bool pass) {
        rep.applicable[static_cast<int>(c)] = applicable;
        rep.pass[static_cast<int>(c)] = !applicable || pass;
        if (applicable && !pass) rep.overall = false;
    };

    int n_spec = static_cast<int>(spec.objects.size());
    int n_img = static_cast<int>(found.objects.size());

    bool shape_present = false;
    if (n_spec == 1)
        for (const Object& o : found.objects) shape_present |= (o.shape == spec.objects[0].shape);
    set_cat(Category::SingleObj, n_spec == 1, shape_present);

    set_cat(Category::TwoObj, n_spec == 2, multiset_contains(/*use_color=*/false));

    set_cat(Category::Counting, spec.expected_count >= 0, n_img == spec.expected_count);

    int n_colored = 0;
    for (const auto& oc : spec.objects) n_colored += (oc.color >= 0);
    set_cat(Category::Colors, n_colored >= 1, multiset_contains(/*use_color=*/true));

    bool positions_ok = true;
    int n_positioned = 0;
    for (const auto& oc : spec.objects) {
        if (oc.row < 0) continue;
        ++n_positioned;
        if (oc.row >= image.rows || oc.col >= image.cols) {
            positions_ok = false;
            continue;
        }
        int v = image.at(oc.row, oc.col);
        if (v == kCellEmpty || cell_shape(v) != oc.shape ||
            (oc.color >= 0 && cell_color(v) != oc.color))
            positions_ok = false;
    }
    set_cat(Category::Position, n_positioned >= 1, positions_ok);

    set_cat(Category::ColorAttr, n_spec >= 2 && n_colored >= 2, multiset_contains(/*use_color=*/true));

    return rep;
}

// ---------------------------------------------------------------------------
// JSON serialization (line-delimited dataset records).
// ---------------------------------------------------------------------------

inline json scene_to_json(const Scene& s) {
    json objs = json::array();
    for (const Object& o : s.sorted_objects())
        objs.push_back({{"row", o.row},
                        {"col", o.col},
                        {"shape", shape_name(o.shape)},
                        {"color", color_name(o.color)}});
    return json{{"grid", {s.rows, s.cols}}, {"objects", objs}};
}

inline Scene scene_from_json(const json& j) {
    Scene s;
    s.rows = j.at("grid").at(0).get<int>();
    s.cols = j.at("grid").at(1).get<int>();
    for (const auto& o : j.at("objects")) {
        Object ob;
        ob.row = o.at("row").get<int>();
        ob.col = o.at("col").get<int>();
        ob.shape = shape_from_name(o.at("shape").get<std::string>());
        ob.color = color_from_name(o.at("color").get<std::string>());
        if (ob.shape < 0 || ob.color < 0) throw ValidationError("bad shape/color in scene json");
        s.objects.push_back(ob);
    }
    s.validate();
    return s;
}

inline json image_to_json(const GridImage& img) {
    json cells = json::array();
    for (int v : img.cells) cells.push_back(cell_label(v));
    return json{{"rows", img.rows}, {"cols", img.cols}, {"cells", cells}};
}

inline GridImage image_from_json(const json& j) {
    GridImage img;
    img.rows = j.at("rows").get<int>();
    img.cols = j.at("cols").get<int>();
    for (const auto& c : j.at("cells")) img.cells.push_back(cell_from_label(c.get<std::string>()));
    if (static_cast<int>(img.cells.size()) != img.rows * img.cols)
        throw ValidationError("image json: cell count mismatch");
    return img;
}

struct SceneRecord {
    Scene scene;
    TaskBundle tasks;
};

inline json scene_record_to_json(const SceneRecord& rec) {
    const Vocab& vb = vocab();
    GridImage img = render(rec.scene);
    json cells = json::array();
    for (int v : img.cells) cells.push_back(cell_label(v));
    json qa = json::array();
    for (const auto& q : rec.tasks.qa)
        qa.push_back({{"question", vb.detokenize(q.question)}, {"answer", vb.detokenize(q.answer)}});
    json edits = json::array();
    for (const auto& e : rec.tasks.edits)
        edits.push_back({{"instruction", vb.detokenize(e.instruction)},
                         {"target_scene", scene_to_json(e.target_scene)}});
    return json{{"scene", scene_to_json(rec.scene)},
                {"image_cells", cells},
                {"caption", vb.detokenize(rec.tasks.caption)},
                {"qa", qa},
                {"edits", edits}};
}

inline SceneRecord scene_record_from_json(const json& j) {
    const Vocab& vb = vocab();
    SceneRecord rec;
    rec.scene = scene_from_json(j.at("scene"));
    rec.tasks.caption = vb.tokenize(j.at("caption").get<std::string>());
    for (const auto& q : j.at("qa"))
        rec.tasks.qa.push_back({vb.tokenize(q.at("question").get<std::string>()),
                                vb.tokenize(q.at("answer").get<std::string>())});
    for (const auto& e : j.at("edits"))
        rec.tasks.edits.push_back({vb.tokenize(e.at("instruction").get<std::string>()),
                                   scene_from_json(e.at("target_scene"))});
    return rec;
}

}  // namespace gridflow
