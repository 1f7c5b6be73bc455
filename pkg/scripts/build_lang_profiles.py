#!/usr/bin/env python3
"""Regenerate the shipped trigram language profiles from seed texts.

Seed texts are short maintenance-flavored passages per language; the output
JSON files (top trigrams by frequency) live in src/devicedesk/data/lang_profiles/.
Run from the repo root:  python scripts/build_lang_profiles.py
"""

import json
from pathlib import Path

import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from devicedesk.rag.language import text_trigrams  # noqa: E402

TOP_N = 400

SEEDS = {
    "en": """
        Turn off the scanner and disconnect the power cable before cleaning.
        Wipe the probe with a soft cloth and approved disinfectant. Do not
        immerse the connector in liquid. Check the cable for cracks and the
        pins for corrosion. If the error persists after restarting the
        system, contact the biomedical engineering department. The monthly
        maintenance routine includes checking the air filters, verifying the
        image quality with the test phantom, and recording the results in
        the service log. When the device fails the self test, write down the
        error code shown on the screen. How do I clean the transducer? What
        does this error mean? The power supply must be inspected every year.
        Replace the fuse only with the same type and rating. Keep the room
        temperature within the stated range and make sure the fan vents are
        free of dust. Calibration should be performed by a trained
        technician following the service manual procedure step by step.
    """,
    "fr": """
        Éteignez l'appareil et débranchez le câble d'alimentation avant le
        nettoyage. Essuyez la sonde avec un chiffon doux et un désinfectant
        approuvé. Ne plongez jamais le connecteur dans un liquide. Vérifiez
        le câble et les broches pour détecter des fissures ou de la
        corrosion. Si l'erreur persiste après le redémarrage du système,
        contactez le service biomédical. Comment nettoyer la sonde ? Que
        signifie ce code d'erreur ? L'entretien mensuel comprend la
        vérification des filtres à air, le contrôle de la qualité de
        l'image avec le fantôme de test et l'enregistrement des résultats
        dans le journal de service. Remplacez le fusible uniquement par un
        fusible du même type. La température de la salle doit rester dans
        la plage indiquée et les grilles de ventilation doivent être
        propres. L'étalonnage doit être effectué par un technicien formé en
        suivant la procédure du manuel de service étape par étape.
    """,
    "sw": """
        Zima mashine na uchomoe kebo ya umeme kabla ya kusafisha. Futa
        kichwa cha uchunguzi kwa kitambaa laini na dawa ya kuua vijidudu
        iliyoidhinishwa. Usizamishe kiunganishi ndani ya maji. Angalia kebo
        na pini kama kuna nyufa au kutu. Ikiwa hitilafu inaendelea baada ya
        kuwasha upya mfumo, wasiliana na idara ya uhandisi wa vifaa tiba.
        Ninawezaje kusafisha kichwa cha uchunguzi? Kosa hili linamaanisha
        nini? Matengenezo ya kila mwezi yanajumuisha kukagua vichujio vya
        hewa, kuthibitisha ubora wa picha kwa kutumia kifaa cha majaribio,
        na kuandika matokeo kwenye daftari la huduma. Badilisha fyuzi kwa
        aina ile ile tu. Joto la chumba libaki ndani ya kiwango
        kilichoelezwa na matundu ya feni yasiwe na vumbi. Urekebishaji
        ufanywe na fundi aliyefunzwa akifuata utaratibu wa mwongozo wa
        huduma hatua kwa hatua.
    """,
    "rw": """
        Zimya imashini kandi ukuremo umugozi w'amashanyarazi mbere yo
        gusukura. Sukura umutwe w'icyuma ukoresheje igitambaro cyoroshye
        n'umuti wemewe wica udukoko. Ntukinjize agace k'umugozi mu mazi.
        Reba umugozi n'utwuma niba hari ibyatanyutse cyangwa ingese. Niba
        ikosa rikomeje nyuma yo kongera gufungura sisitemu, vugana
        n'ishami ry'ubuhanga bw'ibikoresho by'ubuvuzi. Nasukura nte umutwe
        w'icyuma? Iri kosa risobanura iki? Kwita ku mashini buri kwezi
        bikubiyemo kugenzura akayunguruzo k'umwuka, kugenzura ubwiza
        bw'ishusho ukoresheje igikoresho cy'igerageza, no kwandika
        ibyavuye mu igenzura mu gitabo cy'ubugenzuzi. Simbuza fyuzi gusa
        indi y'ubwoko bumwe. Ubushyuhe bw'icyumba bugomba kuguma mu rugero
        rwagenwe kandi imyanya y'umuyaga ntigire umukungugu. Gukosora
        imashini bigomba gukorwa n'umuhanga wabihuguriwe akurikije
        amabwiriza y'igitabo cy'ubugenzuzi intambwe ku yindi.
    """,
}


def main():
    out_dir = Path(__file__).resolve().parents[1] / "src/devicedesk/data/lang_profiles"
    out_dir.mkdir(parents=True, exist_ok=True)
    for tag, seed in SEEDS.items():
        grams = text_trigrams(seed)
        top = dict(sorted(grams.items(), key=lambda kv: (-kv[1], kv[0]))[:TOP_N])
        path = out_dir / f"{tag}.json"
        path.write_text(
            json.dumps({"tag": tag, "trigrams": top}, ensure_ascii=False, sort_keys=True, indent=0)
            + "\n",
            encoding="utf-8",
        )
        print(f"wrote {path} ({len(top)} trigrams)")


if __name__ == "__main__":
    main()
