#pragma once
// generated by tests/oracles/generate.py
#include <array>
#include <complex>

namespace oracle {
using cplx = std::complex<double>;

inline constexpr double kLorentzMixed[4][4] = {{1.1854652182422676, 0, 0.63665358214824119, 0}, {-0.18814399816813035, 0.95533648912560598, -0.3503289262847849, 0}, {0.60821839795874133, 0.29552020666133955, 1.1325181795760881, 0}, {0, 0, 0, 1}};
inline constexpr double kGammaMixed[4][4] = {{0, -1.1325181795760881, -0.3503289262847849, -0.19099607464447235}, {1.1325181795760881, 1.3449634353054037e-17, 0.63665358214824108, 0.10509867788543546}, {0.3503289262847849, -0.63665358214824119, 9.0408719490276486e-18, -0.33975545387282641}, {0.19099607464447235, -0.10509867788543546, 0.33975545387282641, 0}};
inline const cplx kTransform_real_kappa = cplx(0.46888277855384836, -0.002354438173294018);
inline const cplx kTransform_complex_minus = cplx(0.22211112453093124, 0.13359162283478002);
inline const cplx kTransform_complex_plus = cplx(0.85861338398978593, 0.082928498931665387);

inline const std::array<std::array<cplx, 4>, 4> kTwistedPair = {{{cplx(0.56568542494923801, -0.28284271247461906), cplx(0.77709195438764533, 0.35913927350954372), cplx(-0.078455163211949688, 0.13915823879004505), cplx(-0.028360086114640491, -0.49337975516889371)}, {cplx(0.77709195438764533, 0.35913927350954372), cplx(-5.0147670551342694e-18, 0.70710678118654746), cplx(-0.23120443840677918, 0.063061792100781319), cplx(0.30351537789047672, -0.19986131436814034)}, {cplx(-0.078455163211949688, 0.13915823879004505), cplx(-0.23120443840677918, 0.063061792100781319), cplx(-3.0088602330805617e-19, -0.042426406871192847), cplx(0.11734424202278382, 0.061138644191266897)}, {cplx(-0.028360086114640491, -0.49337975516889371), cplx(0.30351537789047672, -0.19986131436814034), cplx(0.11734424202278382, 0.061138644191266897), cplx(-0.16970562748477139, -0.084852813742385708)}}};
inline constexpr double kMasslessNormSq = 1.2533141373154373;
inline const cplx kLocalityI1 = cplx(0.015623643969089281, 1.7078015528035123e-12);
inline const cplx kLocalityI2 = cplx(0.015623643969089281, -1.7078015528035123e-12);
inline const cplx kScatter_005 = cplx(0.99310245474462044, 0.1172497947981533);  // nodes 111, 143
inline const cplx kScatter_01 = cplx(0.97250497123958191, 0.23288211806469813);  // nodes 111, 143
inline const cplx kScatter_05 = cplx(0.38535742648327115, 0.92276738881160636);  // nodes 111, 143
inline const cplx kScatter_1 = cplx(-0.70299930770838048, 0.71119053239025742);  // nodes 111, 143
inline const cplx kWeylRatio = cplx(0.77124601499710677, 0.63653718222196798);
inline constexpr double kMoyalPhase = -0.21875;

}  // namespace oracle
