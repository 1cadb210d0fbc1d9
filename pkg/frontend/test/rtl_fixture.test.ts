import { describe, expect, it } from "vitest";

import { directionOf, displayText } from "../src/state.js";

// Ten Darija lines, several carrying harakat, one with embedded digits.
const FIXTURE = [
  "سلام، لاباس عليك؟",
  "القهوة بنينة بزاف فهاد القهوة",
  "كَتَبَ الولد الدرس كامل",
  "المغرب بلاد زوينة والضيافة تقليد",
  "شحال هادي ما شفتك، فين كنتي؟",
  "غادي نمشي للسوق نشري الخضرة",
  "الطاجين ديال اليوم كان لذيذ",
  "عافاك عطيني 250 درهم ديال الصرف",
  "واش فهمتي مَزيَان ولا نعاود؟",
  "الله يعطيك الصحة على هاد الخدمة",
];

describe("RTL fixture corpus", () => {
  it("every line renders right-to-left", () => {
    for (const line of FIXTURE) {
      expect(directionOf(line), line).toBe("rtl");
    }
  });

  it("the harakat toggle changes exactly the marked lines", () => {
    const changed = FIXTURE.filter(
      (line) => displayText(line, false) !== line,
    );
    expect(changed).toEqual([
      "كَتَبَ الولد الدرس كامل",
      "واش فهمتي مَزيَان ولا نعاود؟",
    ]);
  });

  it("rendered text snapshot (with and without harakat)", () => {
    const rendered = FIXTURE.map((line) => ({
      dir: directionOf(line),
      full: displayText(line, true),
      bare: displayText(line, false),
    }));
    expect(rendered).toMatchSnapshot();
  });
});
