#include <sdp/otcheck.hpp>

namespace sdp {

namespace {

std::optional<Value> apply_payload(const Product& p, const Value& tagged, const Value& s) {
  if (payload_component(tagged) == 1) return p.first.effect(payload_body(tagged), s);
  return p.second.effect(payload_body(tagged), s);
}

}  // namespace

Value tf1(const Product& p, const Value& m, const Value& l) {
  if (payload_component(m) == 1 && payload_component(l) == 2) {
    auto acted = p.act(payload_body(l), payload_body(m));
    if (!acted) {
      throw UndefinedAction("action undefined on (" + canonical(l) + ", " + canonical(m) +
                            ") for '" + p.name + "'");
    }
    return tag_payload(1, *acted);
  }
  return m;
}

bool check_tp1(const Product& p, const Value& sigma, const Value& l, const Value& m) {
  auto after_l = apply_payload(p, l, sigma);
  auto after_m = apply_payload(p, m, sigma);
  if (!after_l || !after_m) return false;
  Value ml, lm;
  try {
    ml = tf1(p, m, l);
    lm = tf1(p, l, m);
  } catch (const UndefinedAction&) {
    return false;
  }
  auto lhs = apply_payload(p, ml, *after_l);
  auto rhs = apply_payload(p, lm, *after_m);
  if (!lhs || !rhs) return false;
  return p.inner_states_equal(*lhs, *rhs);
}

bool check_tp2(const Product& p, const Value& k, const Value& l, const Value& m) {
  try {
    Value lhs = tf1(p, tf1(p, l, k), tf1(p, m, k));
    Value rhs = tf1(p, tf1(p, l, m), tf1(p, k, m));
    return p.messages_equal(lhs, rhs);
  } catch (const UndefinedAction&) {
    return false;
  }
}

TransformFn ot_from_product(std::shared_ptr<const Product> p) {
  return TransformFn{[p](const Value& m, const Value& l) { return tf1(*p, m, l); }};
}

std::shared_ptr<Product> product_from_ot(const Product& base, const TransformFn& tf,
                                         const std::vector<Value>& samples) {
  for (const Value& o : samples) {
    for (const Value& l : samples) {
      if (payload_component(o) == 1 && payload_component(l) == 2) continue;
      Value moved = tf.fn(o, l);
      if (!base.messages_equal(moved, o)) {
        throw ShapeViolation("transformation moves " + canonical(o) + " against " +
                             canonical(l) + "; only first-against-second may transform");
      }
    }
  }
  auto p = std::make_shared<Product>(base);
  p->name = base.name + "-ot";
  p->act = [tf](const Value& m2, const Value& m1) -> std::optional<Value> {
    try {
      return payload_body(tf.fn(tag_payload(1, m1), tag_payload(2, m2)));
    } catch (const UndefinedAction&) {
      return std::nullopt;
    }
  };
  return p;
}

}  // namespace sdp
