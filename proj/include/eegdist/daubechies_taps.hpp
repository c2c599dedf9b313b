#pragma once

// Daubechies scaling filters db1..db10 (filter lengths 2..20), orthonormal
// normalisation (sum = sqrt(2)), minimum-phase, in the classic tap order
// (db2 starts 0.4829629...).

#include <array>
#include <span>

namespace eegdist::detail {

inline constexpr std::array<std::array<double, 20>, 10> kDaubechiesTaps{{
    // db1
    {{0.707106781186547524401,
      0.707106781186547524401}},
    // db2
    {{0.482962913144534143375,
      0.836516303737807905575,
      0.224143868042013381026,
      -0.129409522551260381174}},
    // db3
    {{0.332670552950082615999,
      0.806891509311092576494,
      0.459877502118491570095,
      -0.135011020010254588696,
      -0.0854412738820266616928,
      0.0352262918857095366027}},
    // db4
    {{0.230377813308896500863,
      0.71484657055291564709,
      0.630880767929858907882,
      -0.0279837694168598542114,
      -0.18703481171909308408,
      0.0308413818355607636272,
      0.0328830116668851997354,
      -0.0105974017850690321049}},
    // db5
    {{0.160102397974192914481,
      0.60382926979718967054,
      0.724308528437772927728,
      0.138428145901320731505,
      -0.242294887066382031863,
      -0.0322448695846383746485,
      0.0775714938400457135231,
      -0.00624149021279827427419,
      -0.0125807519990819994685,
      0.003335725285473771278}},
    // db6
    {{0.111540743350109463621,
      0.494623890398453085677,
      0.751133908021095350679,
      0.315250351709197629086,
      -0.226264693965439820076,
      -0.129766867567261935562,
      0.0975016055873230491023,
      0.0275228655303057286255,
      -0.0315820393174860295651,
      0.000553842201161496139252,
      0.00477725751094551063964,
      -0.00107730108530847956485}},
    // db7
    {{0.07785205408500917902,
      0.396539319481917306539,
      0.729132090846235119917,
      0.469782287405193122472,
      -0.143906003928564975405,
      -0.224036184993874982638,
      0.0713092192668302647509,
      0.0806126091510830719129,
      -0.0380299369350144135796,
      -0.0165745416306668806541,
      0.012550998556099840613,
      0.000429577972921366521132,
      -0.00180164070404749091527,
      0.000353713799974520248446}},
    // db8
    {{0.054415842243104009955,
      0.312871590914299970659,
      0.675630736297289806808,
      0.585354683654206712771,
      -0.0158291052563493056674,
      -0.284015542961546926516,
      0.000472484573913282770361,
      0.128747426620478458857,
      -0.0173693010018075461696,
      -0.0440882539307947515068,
      0.0139810279173982816487,
      0.00874609404740577671638,
      -0.00487035299345157431042,
      -0.000391740373376947046298,
      0.00067544940645056936637,
      -0.000117476784124769533731}},
    // db9
    {{0.0380779473638783465887,
      0.243834674612590353732,
      0.604823123690111111903,
      0.657288078051300538078,
      0.133197385825007576191,
      -0.293273783279174908806,
      -0.0968407832229764605135,
      0.148540749338106380135,
      0.0307256814793333792123,
      -0.0676328290613299736756,
      0.000250947114831451957587,
      0.0223616621236790972054,
      -0.00472320475775139727793,
      -0.0042815036824634298345,
      0.00184764688305622647662,
      0.000230385763523195967205,
      -0.000251963188942710136975,
      0.0000393473203162715994807}},
    // db10
    {{0.0266700579005555535866,
      0.188176800077691489021,
      0.527201188931725586482,
      0.688459039453603565742,
      0.281172343660577460749,
      -0.249846424327315379416,
      -0.195946274377377043504,
      0.127369340335793260083,
      0.0930573646035723511604,
      -0.0713941471663970871453,
      -0.0294575368218758128583,
      0.0332126740593410017398,
      0.00360655356695616965542,
      -0.0107331754833305750443,
      0.00139535174705290116579,
      0.00199240529518505611716,
      -0.000685856694959711626561,
      -0.000116466855129285450951,
      0.0000935886703200695913341,
      -0.0000132642028945212448124}},
}};

// Scaling filter of length 2k, k = 1..10.
inline std::span<const double> daubechies_taps(int filter_length) {
    return std::span<const double>(kDaubechiesTaps[filter_length / 2 - 1].data(), static_cast<std::size_t>(filter_length));
}

} // namespace eegdist::detail
