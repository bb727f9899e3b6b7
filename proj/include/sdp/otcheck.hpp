#pragma once

#include <sdp/semidirect.hpp>

#include <functional>
#include <memory>
#include <vector>

namespace sdp {

/// A transformation function over component-tagged payloads: transform(m, l)
/// rewrites incoming m against a prior concurrent l.
struct TransformFn {
  std::function<Value(const Value& m, const Value& l)> fn;
};

/// The product's transformation: l acts on m when m is first-component
/// and l second-component; every other pairing leaves m unchanged.
/// Throws UndefinedAction when the action is undefined on the pair.
Value tf1(const Product& p, const Value& m, const Value& l);

/// Both delivery orders of concurrent l, m from state sigma agree once the
/// later message is transformed by the earlier: transform-then-apply
/// equals the mirrored composition. False when either side is undefined
/// or the results differ.
bool check_tp1(const Product& p, const Value& sigma, const Value& l, const Value& m);

/// Transforming l against k then against transformed m equals the other
/// association: tf1(tf1(l,k), tf1(m,k)) = tf1(tf1(l,m), tf1(k,m)).
bool check_tp2(const Product& p, const Value& k, const Value& l, const Value& m);

TransformFn ot_from_product(std::shared_ptr<const Product> p);

/// Builds the product whose action is o2 |> o1 = transform(o1, o2), after
/// validating on the sampled messages that the function transforms only
/// first-component messages against second-component ones. Samples are
/// tagged payloads. Throws ShapeViolation when a sampled pair moves.
std::shared_ptr<Product> product_from_ot(const Product& base, const TransformFn& tf,
                                         const std::vector<Value>& samples);

}  // namespace sdp
