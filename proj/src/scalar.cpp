#include "tpq/scalar.hpp"

namespace tpq {

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_zero(const Rational& q) { return sgn(q) == 0; }

GaussRat& GaussRat::operator*=(const GaussRat& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRat& GaussRat::operator/=(const GaussRat& o) {
  Rational norm = o.re_ * o.re_ + o.im_ * o.im_;
  if (sgn(norm) == 0) throw std::domain_error("division by zero");
  Rational re = (re_ * o.re_ + im_ * o.im_) / norm;
  Rational im = (im_ * o.re_ - re_ * o.im_) / norm;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussRat::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = im_.get_str() + "*i";
  }
  if (sgn(re_) == 0) return imag;
  std::string out = "(" + re_.get_str();
  if (imag.front() == '-') {
    out += " - " + imag.substr(1);
  } else {
    out += " + " + imag;
  }
  return out + ")";
}

}  // namespace tpq
