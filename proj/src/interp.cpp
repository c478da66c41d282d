#include "structsim/interp.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>

#include "structsim/errors.hpp"
#include "structsim/frontend.hpp"

namespace structsim {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct Object;

struct Value {
  enum class T { Void, Int, Double, Bool, Str, Obj };
  T t = T::Void;
  long long i = 0;
  double d = 0;
  bool b = false;
  std::string s;
  std::shared_ptr<Object> obj;

  static Value of_int(long long v) { Value x; x.t = T::Int; x.i = v; return x; }
  static Value of_double(double v) { Value x; x.t = T::Double; x.d = v; return x; }
  static Value of_bool(bool v) { Value x; x.t = T::Bool; x.b = v; return x; }
  static Value of_str(std::string v) { Value x; x.t = T::Str; x.s = std::move(v); return x; }
  bool is_num() const { return t == T::Int || t == T::Double; }
  double as_double() const { return t == T::Int ? static_cast<double>(i) : d; }
};

struct Object {
  NodeId cls = kNoNode;
  std::map<NodeId, Value> fields;
};

// Runtime fault; carries the comparable output line.
struct Fault {
  std::string msg;
};

struct Flow {
  bool returned = false;
  Value value;
};

class Interp {
public:
  Interp(const Ast& ast, const std::vector<std::string>& inputs, const InterpOptions& opt)
      : ast_(ast), inputs_(inputs), opt_(opt) {}

  std::vector<std::string> run() {
    try {
      NodeId entry = find_entry();
      if (entry == kNoNode) throw Fault{"no entry point '" + opt_.entry + "'"};
      std::shared_ptr<Object> self;
      NodeId cls = enclosing_class(ast_, entry);
      if (cls != kNoNode && ast_.at(cls).kind == NodeKind::ClassDecl)
        self = construct(cls, {});
      call(entry, self, {});
    } catch (const Fault& f) {
      out_.push_back("fault: " + f.msg);
    }
    return std::move(out_);
  }

private:
  const Ast& ast_;
  const std::vector<std::string>& inputs_;
  const InterpOptions& opt_;
  size_t input_pos_ = 0;
  long long steps_ = 0;
  std::vector<std::string> out_;
  std::map<NodeId, Value> statics_;

  struct Frame {
    std::shared_ptr<Object> self;
    std::map<NodeId, Value> locals;
  };
  std::vector<Frame> frames_;

  void step() {
    if (++steps_ > opt_.step_budget) throw Fault{"step budget exceeded"};
  }

  NodeId find_entry() {
    NodeId entry = kNoNode;
    ast_.walk(ast_.root, [&](NodeId n) {
      const Node& nd = ast_.at(n);
      if (nd.alive && nd.kind == NodeKind::MethodDecl && nd.name == opt_.entry &&
          body_of(ast_, n) != kNoNode && nd.children.size() == 1 && entry == kNoNode)
        entry = n;
    });
    return entry;
  }

  std::string format(const Value& v) {
    switch (v.t) {
      case Value::T::Int: return std::to_string(v.i);
      case Value::T::Double: return format_double(v.d);
      case Value::T::Bool: return v.b ? "true" : "false";
      case Value::T::Str: return v.s;
      case Value::T::Obj: throw Fault{"unprintable object value"};
      case Value::T::Void: throw Fault{"use of void value"};
    }
    return "";
  }

  Value default_value(const std::string& type) {
    if (type == "int") return Value::of_int(0);
    if (type == "double") return Value::of_double(0);
    if (type == "boolean") return Value::of_bool(false);
    if (type == "String") return Value::of_str("");
    return Value{}; // class-typed: unusable until assigned
  }

  std::shared_ptr<Object> construct(NodeId cls, const std::vector<Value>& args) {
    step();
    auto obj = std::make_shared<Object>();
    obj->cls = cls;
    NodeId ctor = kNoNode;
    frames_.push_back({obj, {}});
    for (NodeId m : ast_.at(cls).children) {
      const Node& mn = ast_.at(m);
      if (!mn.alive) continue;
      if (mn.kind == NodeKind::FieldDecl && !mn.is_static) {
        obj->fields[m] =
            mn.children.empty() ? default_value(mn.type_name) : eval(mn.children[0]);
      }
      if (mn.kind == NodeKind::ConstructorDecl) ctor = m;
    }
    frames_.pop_back();
    if (ctor != kNoNode) {
      call(ctor, obj, args);
    } else if (!args.empty()) {
      throw Fault{"constructor argument mismatch for " + ast_.at(cls).name};
    }
    return obj;
  }

  Value call(NodeId callable, std::shared_ptr<Object> self, const std::vector<Value>& args) {
    step();
    if (frames_.size() >= 256) throw Fault{"call depth exceeded"};
    const Node& c = ast_.at(callable);
    Frame frame;
    frame.self = std::move(self);
    size_t ai = 0;
    for (NodeId ch : c.children) {
      if (ast_.at(ch).kind != NodeKind::ParamDecl || !ast_.at(ch).alive) continue;
      if (ai >= args.size()) throw Fault{"argument mismatch calling " + c.name};
      frame.locals[ch] = args[ai++];
    }
    if (ai != args.size()) throw Fault{"argument mismatch calling " + c.name};
    frames_.push_back(std::move(frame));
    Flow f = exec_block(body_of(ast_, callable));
    frames_.pop_back();
    return f.returned ? f.value : Value{};
  }

  Flow exec_block(NodeId block) {
    for (NodeId s : ast_.at(block).children) {
      if (!ast_.at(s).alive) continue;
      Flow f = exec_stmt(s);
      if (f.returned) return f;
    }
    return {};
  }

  Flow exec_stmt(NodeId s) {
    step();
    const Node& n = ast_.at(s);
    switch (n.kind) {
      case NodeKind::Block:
        return exec_block(s);
      case NodeKind::LocalVarDecl:
        frames_.back().locals[s] =
            n.children.empty() ? Value{} : eval(n.children[0]);
        return {};
      case NodeKind::Assign: {
        assign(n.children[0], [&] { return eval(n.children[1]); });
        return {};
      }
      case NodeKind::ExprStmt:
        eval(n.children[0]);
        return {};
      case NodeKind::IfStmt: {
        if (truthy(eval(n.children[0]))) return exec_stmt(n.children[1]);
        if (n.children.size() > 2) return exec_stmt(n.children[2]);
        return {};
      }
      case NodeKind::WhileStmt: {
        while (truthy(eval(n.children[0]))) {
          Flow f = exec_stmt(n.children[1]);
          if (f.returned) return f;
        }
        return {};
      }
      case NodeKind::ForStmt: {
        Flow f = exec_stmt(n.children[0]);
        if (f.returned) return f;
        while (truthy(eval(n.children[1]))) {
          Flow body = exec_stmt(n.children[3]);
          if (body.returned) return body;
          Flow upd = exec_stmt(n.children[2]);
          if (upd.returned) return upd;
        }
        return {};
      }
      case NodeKind::ReturnStmt: {
        Flow f;
        f.returned = true;
        if (!n.children.empty()) f.value = eval(n.children[0]);
        return f;
      }
      case NodeKind::ThrowStmt: {
        const Node& ex = ast_.at(n.children[0]);
        for (NodeId a : ex.children) eval(a); // argument side effects
        throw Fault{"exception " + ex.name};
      }
      default:
        throw Fault{std::string("unexpected statement kind ") + kind_name(n.kind)};
    }
  }

  bool truthy(const Value& v) {
    if (v.t != Value::T::Bool) throw Fault{"condition is not boolean"};
    return v.b;
  }

  // Assignment with Java-like order: target receiver first, then the value.
  template <typename Rhs>
  void assign(NodeId lhs, Rhs rhs) {
    const Node& l = ast_.at(lhs);
    if (l.kind == NodeKind::NameRef) {
      Value v = rhs();
      frames_.back().locals[l.resolved] = std::move(v);
      return;
    }
    if (l.kind == NodeKind::FieldAccess) {
      std::shared_ptr<Object> recv = field_receiver(lhs);
      Value v = rhs();
      if (l.resolved != kNoNode && ast_.at(l.resolved).is_static) {
        statics_[l.resolved] = std::move(v);
        return;
      }
      recv->fields[l.resolved] = std::move(v);
      return;
    }
    throw Fault{"invalid assignment target"};
  }

  std::shared_ptr<Object> field_receiver(NodeId fa) {
    const Node& n = ast_.at(fa);
    if (n.resolved != kNoNode && ast_.at(n.resolved).is_static) return nullptr;
    if (!n.children.empty()) {
      Value r = eval(n.children[0]);
      if (r.t != Value::T::Obj || !r.obj) throw Fault{"field access on non-object"};
      return r.obj;
    }
    if (!frames_.back().self) throw Fault{"field access without receiver"};
    return frames_.back().self;
  }

  Value read_field(NodeId fa) {
    const Node& n = ast_.at(fa);
    if (n.resolved == kNoNode) throw Fault{"unresolved field " + n.name};
    const Node& decl = ast_.at(n.resolved);
    if (decl.is_static) {
      auto it = statics_.find(n.resolved);
      if (it == statics_.end()) {
        // static finals are literal-initialized; plain statics default.
        Value v = decl.children.empty() ? default_value(decl.type_name)
                                        : eval(decl.children[0]);
        statics_[n.resolved] = v;
        return v;
      }
      return it->second;
    }
    std::shared_ptr<Object> recv = field_receiver(fa);
    auto it = recv->fields.find(n.resolved);
    if (it == recv->fields.end() || it->second.t == Value::T::Void)
      throw Fault{"uninitialized field " + decl.name};
    return it->second;
  }

  Value read_line() {
    if (input_pos_ >= inputs_.size()) throw Fault{"missing input"};
    const std::string& line = inputs_[input_pos_++];
    // Lexical form decides the type: integer, then double, else string.
    const char* b = line.c_str();
    const char* e = b + line.size();
    long long iv = 0;
    auto ri = std::from_chars(b, e, iv);
    if (ri.ec == std::errc() && ri.ptr == e && !line.empty()) return Value::of_int(iv);
    char* endp = nullptr;
    double dv = std::strtod(b, &endp);
    if (endp == e && !line.empty()) return Value::of_double(dv);
    return Value::of_str(line);
  }

  Value numeric_binop(const std::string& op, const Value& a, const Value& b) {
    if (!a.is_num() || !b.is_num()) throw Fault{"type error: " + op};
    bool ints = a.t == Value::T::Int && b.t == Value::T::Int;
    if (op == "+") return ints ? Value::of_int(a.i + b.i) : Value::of_double(a.as_double() + b.as_double());
    if (op == "-") return ints ? Value::of_int(a.i - b.i) : Value::of_double(a.as_double() - b.as_double());
    if (op == "*") return ints ? Value::of_int(a.i * b.i) : Value::of_double(a.as_double() * b.as_double());
    if (op == "/") {
      if (ints) {
        if (b.i == 0) throw Fault{"division by zero"};
        return Value::of_int(a.i / b.i);
      }
      return Value::of_double(a.as_double() / b.as_double());
    }
    if (op == "%") {
      if (!ints) throw Fault{"type error: %"};
      if (b.i == 0) throw Fault{"division by zero"};
      return Value::of_int(a.i % b.i);
    }
    if (op == "<") return Value::of_bool(a.as_double() < b.as_double());
    if (op == "<=") return Value::of_bool(a.as_double() <= b.as_double());
    if (op == ">") return Value::of_bool(a.as_double() > b.as_double());
    if (op == ">=") return Value::of_bool(a.as_double() >= b.as_double());
    throw Fault{"unknown operator " + op};
  }

  Value equality(const std::string& op, const Value& a, const Value& b) {
    bool eq;
    if (a.is_num() && b.is_num()) {
      eq = a.t == Value::T::Int && b.t == Value::T::Int ? a.i == b.i
                                                        : a.as_double() == b.as_double();
    } else if (a.t == Value::T::Str && b.t == Value::T::Str) {
      eq = a.s == b.s;
    } else if (a.t == Value::T::Bool && b.t == Value::T::Bool) {
      eq = a.b == b.b;
    } else if (a.t == Value::T::Obj && b.t == Value::T::Obj) {
      eq = a.obj == b.obj;
    } else {
      throw Fault{"type error: " + op};
    }
    return Value::of_bool(op == "==" ? eq : !eq);
  }

  Value builtin_call(NodeId e) {
    const Node& n = ast_.at(e);
    std::vector<Value> args;
    for (NodeId a : n.children) args.push_back(eval(a));
    if (n.name == "println") {
      if (args.size() != 1) throw Fault{"println takes one argument"};
      out_.push_back(format(args[0]));
      return Value{};
    }
    if (n.name == "readLine") {
      if (!args.empty()) throw Fault{"readLine takes no arguments"};
      return read_line();
    }
    if (n.name == "sqrt") {
      if (args.size() != 1 || !args[0].is_num()) throw Fault{"sqrt takes one number"};
      return Value::of_double(std::sqrt(args[0].as_double()));
    }
    if (n.name == "abs") {
      if (args.size() != 1 || !args[0].is_num()) throw Fault{"abs takes one number"};
      if (args[0].t == Value::T::Int)
        return Value::of_int(args[0].i < 0 ? -args[0].i : args[0].i);
      return Value::of_double(std::fabs(args[0].d));
    }
    if (n.name == "min" || n.name == "max") {
      if (args.size() != 2 || !args[0].is_num() || !args[1].is_num())
        throw Fault{n.name + " takes two numbers"};
      bool ints = args[0].t == Value::T::Int && args[1].t == Value::T::Int;
      bool takeFirst = n.name == "min"
                           ? args[0].as_double() <= args[1].as_double()
                           : args[0].as_double() >= args[1].as_double();
      const Value& v = takeFirst ? args[0] : args[1];
      return ints ? v : Value::of_double(v.as_double());
    }
    throw Fault{"unknown builtin " + n.name};
  }

  Value eval(NodeId e) {
    step();
    const Node& n = ast_.at(e);
    switch (n.kind) {
      case NodeKind::Literal:
        switch (n.lit_type) {
          case LitType::Int: return Value::of_int(std::strtoll(n.literal.c_str(), nullptr, 10));
          case LitType::Double: return Value::of_double(std::strtod(n.literal.c_str(), nullptr));
          case LitType::Bool: return Value::of_bool(n.literal == "true");
          case LitType::String: return Value::of_str(n.literal);
          case LitType::None: break;
        }
        throw Fault{"malformed literal"};
      case NodeKind::NameRef: {
        auto it = frames_.back().locals.find(n.resolved);
        if (it == frames_.back().locals.end() || it->second.t == Value::T::Void)
          throw Fault{"uninitialized variable " + n.name};
        return it->second;
      }
      case NodeKind::FieldAccess:
        return read_field(e);
      case NodeKind::UnaryOp: {
        if (n.op == "!") {
          Value v = eval(n.children[0]);
          if (v.t != Value::T::Bool) throw Fault{"type error: !"};
          return Value::of_bool(!v.b);
        }
        if (n.op == "neg") {
          Value v = eval(n.children[0]);
          if (v.t == Value::T::Int) return Value::of_int(-v.i);
          if (v.t == Value::T::Double) return Value::of_double(-v.d);
          throw Fault{"type error: unary -"};
        }
        // ++/--: read-modify-write on a variable or field.
        NodeId target = n.children[0];
        Value old = ast_.at(target).kind == NodeKind::FieldAccess
                        ? read_field(target)
                        : eval(target);
        if (!old.is_num()) throw Fault{"type error: " + n.op};
        long long di = n.op[0] == '+' ? 1 : -1;
        Value now = old.t == Value::T::Int ? Value::of_int(old.i + di)
                                           : Value::of_double(old.d + di);
        assign(target, [&] { return now; });
        bool pre = n.op.size() > 3 && n.op.substr(2) == "pre";
        return pre ? now : old;
      }
      case NodeKind::BinaryOp: {
        if (n.op == "&&") {
          Value l = eval(n.children[0]);
          if (l.t != Value::T::Bool) throw Fault{"type error: &&"};
          if (!l.b) return Value::of_bool(false);
          Value r = eval(n.children[1]);
          if (r.t != Value::T::Bool) throw Fault{"type error: &&"};
          return r;
        }
        if (n.op == "||") {
          Value l = eval(n.children[0]);
          if (l.t != Value::T::Bool) throw Fault{"type error: ||"};
          if (l.b) return Value::of_bool(true);
          Value r = eval(n.children[1]);
          if (r.t != Value::T::Bool) throw Fault{"type error: ||"};
          return r;
        }
        Value a = eval(n.children[0]);
        Value b = eval(n.children[1]);
        if (n.op == "==" || n.op == "!=") return equality(n.op, a, b);
        if (n.op == "+" && (a.t == Value::T::Str || b.t == Value::T::Str))
          return Value::of_str(format(a) + format(b));
        return numeric_binop(n.op, a, b);
      }
      case NodeKind::OptionalWrap:
        return eval(n.children[0]);
      case NodeKind::OptionalUnwrap: {
        Value v = eval(n.children[0]);
        // orElse evaluates its argument eagerly, like a Java method call.
        for (size_t i = 1; i < n.children.size(); ++i) eval(n.children[i]);
        return v;
      }
      case NodeKind::Call: {
        if (n.resolved == kNoNode && !n.has_receiver) return builtin_call(e);
        std::shared_ptr<Object> recv;
        size_t first = 0;
        if (n.has_receiver) {
          Value r = eval(n.children[0]);
          if (r.t != Value::T::Obj || !r.obj) throw Fault{"call on non-object"};
          recv = r.obj;
          first = 1;
        } else {
          recv = frames_.back().self;
        }
        NodeId target = n.resolved;
        if (target == kNoNode) {
          // Receiver type unknown statically: dynamic lookup by name.
          for (NodeId m : ast_.at(recv->cls).children)
            if (ast_.at(m).alive && ast_.at(m).kind == NodeKind::MethodDecl &&
                ast_.at(m).name == n.name)
              target = m;
          if (target == kNoNode) throw Fault{"no method " + n.name};
        }
        std::vector<Value> args;
        for (size_t i = first; i < n.children.size(); ++i) args.push_back(eval(n.children[i]));
        return call(target, recv, args);
      }
      case NodeKind::New: {
        std::vector<Value> args;
        for (NodeId a : n.children) args.push_back(eval(a));
        Value v;
        v.t = Value::T::Obj;
        v.obj = construct(n.resolved, args);
        return v;
      }
      default:
        throw Fault{std::string("unexpected expression kind ") + kind_name(n.kind)};
    }
  }
};

} // namespace

std::vector<std::string> interpret_program(const Ast& ast,
                                           const std::vector<std::string>& inputs,
                                           const InterpOptions& opt) {
  return Interp(ast, inputs, opt).run();
}

ProgramIO interpret_many(const Ast& ast,
                         const std::vector<std::vector<std::string>>& inputs,
                         const InterpOptions& opt) {
  ProgramIO io;
  io.inputs = inputs;
  for (const auto& vec : inputs) io.outputs.push_back(interpret_program(ast, vec, opt));
  return io;
}

bool io_equal(const ProgramIO& a, const ProgramIO& b) {
  return a.inputs == b.inputs && a.outputs == b.outputs;
}

} // namespace structsim
