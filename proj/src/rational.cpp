#include "periodmap/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace periodmap {

GaussianRational GaussianRational::from_parts(long re_num, long re_den, long im_num, long im_den) {
    if (re_den == 0 || im_den == 0) throw std::invalid_argument("zero denominator in rational literal");
    mpq_class r(re_num, re_den);
    mpq_class i(im_num, im_den);
    r.canonicalize();
    i.canonicalize();
    return {r, i};
}

GaussianRational GaussianRational::inverse() const {
    mpq_class n = norm();
    if (n == 0) throw std::domain_error("division by zero Gaussian rational");
    return {re / n, -im / n};
}

std::string GaussianRational::str() const {
    if (im == 0) return re.get_str();
    if (re == 0) return "i*" + im.get_str();
    std::string s = re.get_str();
    if (im > 0)
        s += "+i*" + im.get_str();
    else
        s += "-i*" + mpq_class(-im).get_str();
    return s;
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& q) { return os << q.str(); }

}  // namespace periodmap
